import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from choquet_lab.errors import DegenerateInput, DimensionMismatch, NoConstants, SamePoint, SmoothNormUnsupported
from choquet_lab.function_space import (
    Constants,
    FunctionSpace,
    Representable,
    constants_status,
    evaluation_norms,
    operator_norm_at,
    operator_norm_direct,
    representable_operator,
    state_space,
    structure_report,
    theta_collapses,
    theta_collapses_direct,
    upsilon,
    weak_space,
)
from choquet_lab.normed_space import NormSpec, dual_vertices
from strategies import library_space, problem_docs

F = Fraction
docs = problem_docs(max_points=4, max_dim=2)


@given(docs)
def test_space_basis_matches_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    assert list(H.basis) == S.basis
    assert list(weak_space(H).basis) == S.weak_basis


@given(docs)
def test_constants_status_matches_oracle(doc):
    H = library_space(doc)
    C = oracles.Context(doc, ())
    assert oracles._c_constants(C, {}, constants_status(H).value)
    assert oracles._c_constants_w(C, {}, weak_space(H).contains_constants)


@given(problem_docs(max_points=3, max_dim=2, with_constants=True))
def test_constraints_killing_constants_keep_every_constant(doc):
    assert constants_status(library_space(doc)) is Constants.FULL


@given(docs)
def test_structure_matches_oracle(doc):
    H = library_space(doc)
    S = oracles.Space(doc)
    r = structure_report(H, 0, 1)
    assert list(r.H_t.basis) == oracles.span_basis([S.value(f, 1) for f in S.basis], S.d)
    assert list(r.H_st.basis) == oracles.span_basis([S.value(f, 0) + S.value(f, 1) for f in S.basis], 2 * S.d)
    separates = all(any(g[u] != g[v] for g in S.weak_basis) for u, v in itertools.combinations(range(S.n), 2))
    assert r.separates == separates
    # separating through H_w is implied by separating through H and conversely
    assert r.separates == r.separates_direct


@settings(max_examples=15)
@given(problem_docs(max_points=3, max_dim=2), st.data())
def test_evaluation_norms_match_oracle(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    x = data.draw(st.sampled_from(sorted(dual_vertices(H.target))))
    ev = evaluation_norms(H, t, x)
    ball = oracles.unit_ball_vertices(S)
    assert ev.phi_H == max(S.E.norm(S.block(oracles.combine(S, c), t)) for c in ball)
    assert ev.phi_Hw == max(abs(oracles.dot(c, S.weak_eval(t))) for c in oracles.weak_ball_vertices(S))
    assert ev.phi_Hl == max(abs(oracles.dot(x, S.block(oracles.combine(S, c), t))) for c in ball)
    assert ev.phi_H <= ev.phi_Hw == ev.phi_Hs <= 1
    assert operator_norm_at(H, t) == operator_norm_direct(H, t)


@given(docs)
def test_theta_collapses_match_oracle(doc):
    H = library_space(doc)
    C = oracles.Context(doc, ())
    got = theta_collapses(H)
    assert oracles._c_theta(C, {}, [[s, t, str(a)] for s, t, a in got])
    # equal operators have equal scalar slices
    assert set(theta_collapses_direct(H)) <= set(got)


@given(docs, st.data())
def test_evaluations_are_representable_with_minimal_mass(doc, data):
    H = library_space(doc)
    S = oracles.Space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    rep = representable_operator(H, H.eval_matrix(t))
    assert isinstance(rep, Representable)
    total, _ = oracles.scalar_set(S, t)
    assert rep.norm_r == total <= 1
    # the witness acts like the evaluation on every coordinate slice
    for g in S.weak_basis:
        assert oracles.dot(g, rep.witness) == g[t]


@given(docs, st.data())
def test_upsilon_of_an_evaluation_is_the_evaluation(doc, data):
    H = library_space(doc)
    t = data.draw(st.integers(0, H.n - 1))
    assert upsilon(H, weak_space(H).evaluation(t)) == H.eval_matrix(t)


@given(problem_docs(max_points=4, max_dim=1, with_constants=True))
def test_state_space_vertices(doc):
    H = library_space(doc)
    Hw = weak_space(H)
    evs = [Hw.evaluation(t) for t in range(H.n)]
    assert sorted(state_space(Hw).vertices) == oracles.extreme_subset(evs)


def test_input_errors():
    H = FunctionSpace.full(["a", "b"], NormSpec.linf(1))
    with pytest.raises(SamePoint):
        structure_report(H, "a", "a")
    with pytest.raises(DegenerateInput):
        evaluation_norms(H, "a", (2,))
    with pytest.raises(DimensionMismatch):
        representable_operator(H, [[1]])
    with pytest.raises(SmoothNormUnsupported):
        evaluation_norms(H.with_target(NormSpec.lp(1, 2)), "a")
    H0 = FunctionSpace.from_functions(["a", "b"], NormSpec.linf(1), [[[1], [0]]])
    with pytest.raises(NoConstants):
        state_space(weak_space(H0))
    with pytest.raises(DegenerateInput):
        FunctionSpace.from_functions(["a", "a"], NormSpec.linf(1), [[[1], [0]]])
    with pytest.raises(DegenerateInput):
        FunctionSpace.from_functions(["a", "b"], NormSpec.linf(1), [[[1], [0]], [[2], [0]]])
