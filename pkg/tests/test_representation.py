from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from choquet_lab.boundary import boundary_indices
from choquet_lab.corpus import fixture
from choquet_lab.errors import DegenerateInput, NoConstantsInHw, NotWeaklySimplicial, SmoothNormUnsupported
from choquet_lab.function_space import FunctionSpace, structure_report, weak_space
from choquet_lab.normed_space import NormSpec, dual_vertices
from choquet_lab.representation import (
    Status,
    VectorMeasure,
    ac_spaces,
    contains_measure,
    default_probes,
    dilation_suite,
    functional_norm,
    functional_vector_simplicial,
    functional_weak_simplicial,
    l1_predual_check,
    representing_measures_at,
    representing_measures_scalar,
    representing_measures_vector,
    vector_simplicial,
    verify_norming_certificate,
    verify_scalar_witness,
    verify_vector_witness,
    weak_simplicial,
)
from strategies import library_space, problem_docs, small_int, vectors

F = Fraction
scalar_docs = problem_docs(max_points=4, max_dim=2)
vector_docs = problem_docs(max_points=3, max_dim=2)


def _probes(H):
    return [(p.point, p.x_star) for p in default_probes(H)]


@given(scalar_docs, st.data())
def test_scalar_representing_sets_match_arrangement_oracle(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    rs = representing_measures_scalar(H, t)
    total, verts = oracles.scalar_set(S, t)
    assert rs.norm == total
    assert sorted(v.values for v in rs.vertices) == verts


@given(vector_docs, st.data())
def test_vector_representing_sets_match_arrangement_oracle(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    x = data.draw(st.sampled_from(sorted(dual_vertices(H.target))))
    rs = representing_measures_at(H, t, x)
    total, verts = oracles.vector_set(S, S.dirac(t, x))
    assert rs.norm == total
    assert sorted(v.flat for v in rs.vertices) == verts
    for v in rs.vertices:
        assert contains_measure(H, rs.functional, v)


@given(vector_docs, st.data())
def test_functional_norm_matches_oracle(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    phi = data.draw(vectors(H.m, small_int))
    res = functional_norm(H, phi)
    x0 = oracles.solve(S.basis, phi, S.n * S.d)
    assert res.value == oracles.vector_set(S, x0)[0]
    assert res.measure.action(H) == tuple(phi)
    assert res.measure.total_variation(H.target) == res.value


@given(vector_docs, st.data())
def test_perturbed_measures_are_not_representing(doc, data):
    H = library_space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    x = data.draw(st.sampled_from(sorted(dual_vertices(H.target))))
    rs = representing_measures_at(H, t, x)
    bump = data.draw(st.lists(vectors(H.d, small_int), min_size=H.n, max_size=H.n))
    mu = rs.vertices[0] + VectorMeasure.of(bump)
    S = oracles.Space(doc)
    flat = mu.flat
    expected = S.action(flat) == S.action(rs.vertices[0].flat) and S.mass(flat) == rs.norm
    assert contains_measure(H, rs.functional, mu) == expected


@given(scalar_docs)
def test_weak_simpliciality_matches_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    v = weak_simplicial(H)
    assert v.status.value == oracles.weak_status(S)[0]
    if v.status is Status.FAILS:
        assert verify_scalar_witness(H, v.witness)


@settings(max_examples=15)
@given(vector_docs)
def test_vector_simpliciality_matches_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    v = vector_simplicial(H)
    assert v.status.value == oracles.vector_status(S, _probes(H))[0]
    if v.status is Status.FAILS:
        assert verify_vector_witness(H, v.witness)
    assert v.undecided == ()


@settings(max_examples=15)
@given(vector_docs)
def test_functional_vector_simpliciality_refines_probe_test(doc):
    H = library_space(doc)
    v = functional_vector_simplicial(H)
    probe = vector_simplicial(H)
    if v.status is Status.FAILS:
        assert verify_vector_witness(H, v.witness)
    # on probe functionals both tests look at the same sets; the probe test may
    # additionally fail through the constants lift
    if probe.status is Status.HOLDS_ON_PROBES:
        assert v.status is Status.HOLDS_ON_PROBES


@given(problem_docs(max_points=4, max_dim=1, with_constants=True))
def test_functional_weak_simpliciality_is_the_state_space_test(doc):
    H = library_space(doc)
    Hw = weak_space(H)
    assume(Hw.contains_constants)
    verts = oracles.extreme_subset([Hw.evaluation(t) for t in range(H.n)])
    v = functional_weak_simplicial(H)
    assert (v.status is Status.HOLDS) == oracles.affinely_independent(verts)
    if v.status is Status.FAILS:
        assert verify_scalar_witness(H, v.witness)


@settings(max_examples=15)
@given(vector_docs)
def test_affine_spaces_match_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    ac = ac_spaces(H)
    assert list(ac.ac_w.basis) == oracles.acw_space(S)
    assert list(ac.ac_v_upper.basis) == oracles.acv_upper_space(S, _probes(H))


@given(problem_docs(max_points=4, max_dim=2, with_constants=True))
def test_dilation_matches_oracle(doc):
    H = library_space(doc)
    assume(weak_space(H).contains_constants and weak_simplicial(H).status is Status.HOLDS)
    S = oracles.Space(doc)
    suite = dilation_suite(H)
    assert [tuple(r) for r in suite.D] == [tuple(r) for r in oracles.dilation(S)]
    assert suite.checks.fixed_space_is_acw and suite.checks.idempotent
    assert suite.checks.rows_boundary_probabilities and suite.checks.restriction_isometric


# the oracle lists extreme points by brute force, so keep A_c^w small
@settings(max_examples=8)
@given(problem_docs(max_points=3, max_dim=2, kinds=("linf",), with_constants=True))
def test_l1_predual_matches_oracle(doc):
    H = library_space(doc)
    assume(weak_space(H).contains_constants)
    r = l1_predual_check(H)
    C = oracles.Context(doc, ())
    assert oracles._c_l1_predual(C, {}, {"acw": r.acw_is_l1_predual, "E": r.E_is_l1_predual,
                                         "weak": r.weakly_simplicial})
    if structure_report(H, 0, 1).separates:
        assert r.acw_is_l1_predual == (r.weakly_simplicial and r.E_is_l1_predual)


def test_l1_predual_report_on_a_space_that_does_not_separate_points():
    # constants on two points: both points are boundary points with the same evaluation
    H = FunctionSpace.from_constraints(["a", "b"], NormSpec.linf(1), [[[1], [-1]]])
    r = l1_predual_check(H)
    assert r.acw_is_l1_predual and not r.weakly_simplicial


def test_smooth_target_with_constants_uses_tensor_measures():
    H = FunctionSpace.full(["a", "b"], NormSpec.lp(2, 2))
    rs = representing_measures_at(H, "a", (F(3, 5), F(4, 5)))
    assert rs.complete and rs.norm is None
    assert [m.values for m in rs.vertices] == [((F(3, 5), F(4, 5)), (0, 0))]


def test_smooth_target_without_constants_certifies_a_subset():
    H = fixture("renorm1").problem.space
    for p in default_probes(H):
        rs = representing_measures_at(H, p.point, p.x_star)
        assert not rs.complete and len(rs.certificates) == len(rs.vertices)
        for cert in rs.certificates:
            assert verify_norming_certificate(H, p.point, p.x_star, cert)
    # the same space under the l_2 norm at a non-axis direction: nothing certified
    H = fixture("nezachovani").problem.space.with_target(NormSpec.lp(2, 2))
    rs = representing_measures_at(H, "0", (1, 1))
    assert not rs.complete and rs.vertices == ()


def _square_with_center():
    # affine functions on the corners and the center of a square
    pts = [(0, 0), (1, 0), (0, 1), (1, 1), (F(1, 2), F(1, 2))]
    funcs = [[[1] for _ in pts], [[x] for x, _ in pts], [[y] for _, y in pts]]
    return FunctionSpace.from_functions(["a", "b", "c", "d", "e"], NormSpec.linf(1), funcs)


def test_witnesses_reject_tampering():
    from dataclasses import replace

    H = _square_with_center()
    v = weak_simplicial(H)
    assert v.status is Status.FAILS and v.witness.label == "e"
    assert verify_scalar_witness(H, v.witness)
    assert not verify_scalar_witness(H, replace(v.witness, second=v.witness.first))
    assert functional_weak_simplicial(H).status is Status.FAILS
    Hv = fixture("wsnevs-const").problem.space
    w = vector_simplicial(Hv).witness
    assert verify_vector_witness(Hv, w)
    assert not verify_vector_witness(Hv, replace(w, second=w.first.scale(2)))


def test_representation_errors():
    H = FunctionSpace.full(["a", "b"], NormSpec.linf(2))
    with pytest.raises(DegenerateInput):
        representing_measures_at(H, "a", (1,))
    with pytest.raises(DegenerateInput):
        functional_norm(H, (1, 2))
    with pytest.raises(SmoothNormUnsupported):
        representing_measures_vector(H.with_target(NormSpec.lp(2, 3)), (1, 0, 0, 0))
    H0 = FunctionSpace.from_functions(["a", "b"], NormSpec.linf(1), [[[1], [0]]])
    with pytest.raises(NoConstantsInHw):
        dilation_suite(H0)
    with pytest.raises(NoConstantsInHw):
        functional_weak_simplicial(H0)
    with pytest.raises(NotWeaklySimplicial):
        dilation_suite(_square_with_center())
    assert boundary_indices(H) == (0, 1)
