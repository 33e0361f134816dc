from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from choquet_lab.boundary import boundary_indices
from choquet_lab.errors import BarycenterMismatch, NegativeMeasure, NotInNMu, NotMaximal, SmoothNormUnsupported
from choquet_lab.function_space import FunctionSpace, structure_report, weak_space
from choquet_lab.normed_space import NormSpec, dual_vertices
from choquet_lab.orders import (
    Comparison,
    ProductMeasure,
    choquet_leq,
    choquet_leq_ball,
    convex_cone,
    in_n_mu,
    lower_envelope,
    maximality_check,
    n_mu_compare,
    n_mu_minimal,
    product_representation,
    t_star,
    w_map,
)
from choquet_lab.representation import VectorMeasure, representing_measures_scalar
from strategies import library_space, problem_docs, small_int, vectors

F = Fraction
nonneg = st.builds(F, st.integers(0, 3), st.integers(1, 2))
# the order structures are defined for spaces whose H_w contains constants
scalar_docs = problem_docs(max_points=4, max_dim=1, with_constants=True)
constant_docs = problem_docs(max_points=4, max_dim=2, with_constants=True)


def _positive(data, n):
    return data.draw(vectors(n, nonneg))


@given(scalar_docs, st.data())
def test_choquet_order_matches_cone_oracle(doc, data):
    H = library_space(doc)
    assume(weak_space(H).contains_constants)
    S = oracles.Space(doc)
    s1, s2 = _positive(data, H.n), _positive(data, H.n)
    assert choquet_leq(H, s1, s2) == oracles.choquet_leq(S, s1, s2)
    assert choquet_leq(H, s1, s1)


@given(scalar_docs, st.data())
def test_representing_probabilities_dominate_the_dirac(doc, data):
    H = library_space(doc)
    assume(weak_space(H).contains_constants)
    t = data.draw(st.integers(0, H.n - 1))
    dirac = tuple(F(int(s == t)) for s in range(H.n))
    for sigma in representing_measures_scalar(H, t).vertices:
        if all(x >= 0 for x in sigma.values):
            assert choquet_leq(H, dirac, sigma.values)


@given(scalar_docs, st.data())
def test_lower_envelope_is_the_largest_convex_minorant(doc, data):
    H = library_space(doc)
    assume(weak_space(H).contains_constants)
    S = oracles.Space(doc)
    f = data.draw(vectors(H.n, small_int))
    g = lower_envelope(H, f)
    assert all(a <= b for a, b in zip(g, f))
    normals = oracles.convex_cone_normals(S)
    assert all(oracles.dot(a, g) <= 0 for a in normals)
    assert convex_cone(H).contains(g)


@settings(max_examples=10)
@given(constant_docs, st.data())
def test_maximal_measures_are_the_boundary_measures(doc, data):
    H = library_space(doc)
    # standing assumptions of the order theory: constants in H_w, points separated
    assume(weak_space(H).contains_constants and structure_report(H, 0, 1).separates)
    r = maximality_check(H, _positive(data, H.n))
    assert r.agree


def _boundary_measure(data, H):
    ch = set(boundary_indices(H))
    rows = []
    for s in range(H.n):
        row = data.draw(vectors(H.d, small_int))
        rows.append(row if s in ch else (0,) * H.d)
    return VectorMeasure.of(rows)


@given(problem_docs(max_points=3, max_dim=2), st.data())
def test_lift_and_projection(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    rows = data.draw(st.lists(vectors(H.d, small_int), min_size=H.n, max_size=H.n))
    mu = VectorMeasure.of(rows)
    nu = w_map(mu, H.target)
    assert t_star(nu) == mu and in_n_mu(H, mu, nu)
    assert nu.mass == S.mass(mu.flat)
    assert oracles._c_w_roundtrip(oracles.Context(doc, ()), {"measure": [list(r) for r in mu.values]}, True)


@given(problem_docs(max_points=3, max_dim=3), st.data())
def test_minimal_elements_of_the_fibre(doc, data):
    H = library_space(doc)
    mu = _boundary_measure(data, H)
    res = n_mu_minimal(H, mu)
    assert in_n_mu(H, mu, res.minimal)
    C = oracles.Context(doc, ())
    assert oracles._c_n_mu_unique(C, {"measure": [list(r) for r in mu.values]}, res.unique)
    lifted = w_map(mu, H.target)
    assert n_mu_compare(H, mu, res.minimal, lifted) in (Comparison.LEQ, Comparison.EQUAL)
    if not res.unique:
        assert in_n_mu(H, mu, res.alternative) and res.alternative != res.minimal
    # minimal kernels live on dual-ball vertices
    assert all(x in dual_vertices(H.target) for _, x, _ in res.minimal.atoms)


@settings(max_examples=15)
@given(problem_docs(max_points=3, max_dim=2, with_constants=True), st.data())
def test_product_representation_matches_oracle(doc, data):
    H = library_space(doc)
    assume(weak_space(H).contains_constants)
    t = data.draw(st.integers(0, H.n - 1))
    x = data.draw(st.sampled_from(sorted(dual_vertices(H.target))))
    rep = product_representation(H, H.functional_at(t, x))
    exp = {"mass": rep.mass,
           "atoms": [[H.points[s], list(v), m] for s, v, m in rep.measure.atoms]}
    args = {"point": H.points[t], "x_star": list(x)}
    assert oracles._c_product(oracles.Context(doc, ()), args, exp)


def test_dirac_at_barycenter_precedes_every_decomposition():
    spec = NormSpec.linf(2)
    dirac = [((0, 0), 1)]
    spread = [((1, 0), F(1, 2)), ((-1, 0), F(1, 2))]
    assert choquet_leq_ball(spec, dirac, spread)
    assert not choquet_leq_ball(spec, spread, dirac)
    with pytest.raises(BarycenterMismatch):
        choquet_leq_ball(spec, dirac, [((1, 0), 1)])


def test_order_errors():
    H = FunctionSpace.full(["a", "b"], NormSpec.linf(1))
    with pytest.raises(NegativeMeasure):
        choquet_leq(H, (1, -1), (1, 0))
    with pytest.raises(NegativeMeasure):
        ProductMeasure(2, 1, ((0, (F(1),), F(-1)),))
    mu = VectorMeasure.of([(1,), (0,)])
    wrong = ProductMeasure.of(2, 1, [(0, (1,), 2)])
    with pytest.raises(NotInNMu):
        n_mu_compare(H, mu, wrong, w_map(mu, H.target))
    inner = FunctionSpace.from_functions(["a", "b", "c"], NormSpec.linf(1),
                                         [[[1], [1], [1]], [[0], [2], [1]]])
    with pytest.raises(NotMaximal):
        n_mu_minimal(inner, VectorMeasure.of([(0,), (0,), (1,)]))
    with pytest.raises(SmoothNormUnsupported):
        w_map(mu, NormSpec.lp(1, 2))
