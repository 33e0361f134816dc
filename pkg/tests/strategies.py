"""Hypothesis strategies for small exact inputs shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

small_int = st.integers(min_value=-3, max_value=3)
small_rational = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


def vectors(n: int, elements=small_rational):
    return st.lists(elements, min_size=n, max_size=n).map(tuple)


@st.composite
def problem_docs(draw, max_points: int = 4, max_dim: int = 2, kinds=("linf", "l1"), with_constants=None):
    """A small problem document: points, a polyhedral target and 0-2 constraints.

    ``with_constants=True`` makes every constraint kill constants by having
    coefficients summing to zero in each coordinate.
    """
    n = draw(st.integers(2, max_points))
    d = draw(st.integers(1, max_dim))
    kind = draw(st.sampled_from(kinds))
    k = draw(st.integers(0, 2))
    cons = []
    for _ in range(k):
        rows = [[draw(small_int) for _ in range(d)] for _ in range(n)]
        if with_constants:
            for i in range(d):
                rows[-1][i] -= sum(r[i] for r in rows)
        cons.append([[str(x) for x in r] for r in rows])
    doc = {"points": [str(i) for i in range(n)], "target": {"kind": kind, "dim": d}}
    if cons:
        doc["constraints"] = cons
    else:
        doc["full"] = True
    return doc


def random_dual_vector(draw, d: int):
    return draw(vectors(d, st.builds(Fraction, st.integers(-5, 5), st.integers(1, 5))))


def library_space(doc: dict):
    """The library's function space for ``doc``; rejects documents whose space is zero."""
    from hypothesis import assume

    from choquet_lab.errors import DegenerateInput
    from choquet_lab.problem import ProblemError, problem_from_dict

    try:
        return problem_from_dict(doc).space
    except (DegenerateInput, ProblemError):
        assume(False)
