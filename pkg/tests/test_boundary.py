from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from choquet_lab.boundary import (
    boundary_conditions_report,
    boundary_indices,
    choquet_boundary,
    hs_extreme,
    is_boundary_measure,
    operator_ball_extreme,
    operator_extreme,
)
from choquet_lab.corpus import fixture, fixtures
from choquet_lab.errors import SmoothNormUnsupported
from choquet_lab.function_space import FunctionSpace
from choquet_lab.normed_space import NormSpec, dual_vertices
from choquet_lab.representation import ScalarMeasure, VectorMeasure
from strategies import library_space, problem_docs, small_int, vectors

F = Fraction
docs = problem_docs(max_points=4, max_dim=2)


@given(docs)
def test_boundary_matches_caratheodory_oracle(doc):
    H = library_space(doc)
    assert list(boundary_indices(H)) == oracles.Space(doc).boundary


@given(docs)
def test_operator_test_matches_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    ops = [oracles._operator(S, s) for s in range(S.n)]
    for t in range(H.n):
        assert operator_extreme(H, t) == oracles._extreme_in_symmetric_hull(ops[t], ops)


# the oracle enumerates basic solutions, so keep the H_s dimension small
@given(problem_docs(max_points=3, max_dim=1), st.data())
def test_hs_extreme_matches_oracle(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    x = data.draw(vectors(H.d, st.builds(F, st.integers(-2, 2), st.just(2))))  # inside the dual ball
    assert hs_extreme(H, t, x) == oracles._extreme_in_symmetric_hull(oracles._hs_eval(S, t, x), oracles._hs_gens(S))


@given(docs)
def test_boundary_conditions_agree(doc):
    H = library_space(doc)
    for t in range(H.n):
        r = boundary_conditions_report(H, t, with_operator_ball=False)
        assert r.consistent, r
        if r.cond3:
            assert hs_extreme(H, t, r.cond3_witness)


@settings(max_examples=8)
@given(problem_docs(max_points=3, max_dim=1))
def test_operator_ball_extreme_matches_oracle_and_implies_boundary(doc):
    H = library_space(doc)
    C = oracles.Context(doc, ())
    for t in range(H.n):
        obe = operator_ball_extreme(H, t)
        assert oracles._c_operator_ball(C, {"point": H.points[t]}, obe)
        if obe:
            assert operator_extreme(H, t)


@pytest.mark.parametrize("name", [f.name for f in fixtures() if f.problem is not None
                                  and f.problem.space.target.polyhedral_kind])
def test_boundary_conditions_agree_on_fixtures(name):
    H = fixture(name).problem.space
    for t in range(H.n):
        # the operator-ball test is exercised on the whole corpus by the acceptance suite
        assert boundary_conditions_report(H, t, with_operator_ball=False).consistent


def test_operator_ball_extreme_is_stronger_than_boundary():
    H = fixture("chH-protipr-linf").problem.space
    r = boundary_conditions_report(H, H.points[0])
    assert r.cond1 and not r.operator_ball_extreme


@given(docs, st.data())
def test_is_boundary_measure_matches_support_test(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    rows = data.draw(st.lists(vectors(H.d, small_int), min_size=H.n, max_size=H.n))
    expected = S.support(S.flat_measure([list(r) for r in rows])) <= set(S.boundary)
    assert is_boundary_measure(H, VectorMeasure.of(rows)) == expected
    scalar = [r[0] for r in rows]
    assert is_boundary_measure(H, ScalarMeasure.of(scalar)) == ({s for s, x in enumerate(scalar) if x} <= set(S.boundary))


def test_boundary_labels_and_smooth_targets():
    H = FunctionSpace.from_functions(["a", "b", "c"], NormSpec.linf(1), [[[1], [0], [F(1, 2)]], [[0], [1], [F(1, 2)]]])
    assert choquet_boundary(H) == ("a", "b")
    smooth = H.with_target(NormSpec.lp(1, 2))
    with pytest.raises(SmoothNormUnsupported):
        boundary_conditions_report(smooth, "a")
    assert choquet_boundary(smooth) == ("a", "b")
    assert dual_vertices(H.target) == ((F(-1),), (F(1),))
