from fractions import Fraction

import pytest

import oracles
from choquet_lab.corpus import compare, fixture, fixtures, run_check, to_json, verify_fixture, worker_count
from choquet_lab.errors import InputError
from choquet_lab.representation import default_probes

IN_SCOPE = [f for f in fixtures() if not f.out_of_scope]


def _probes(fx):
    return [(p.point, p.x_star) for p in default_probes(fx.problem.space, fx.problem.extras)]


def test_every_derived_expectation_names_a_known_oracle():
    for fx in IN_SCOPE:
        for e in fx.expectations:
            if e.source == "derived":
                assert (e.oracle, e.check) in oracles.CONFIRM, (fx.name, e.check)
            elif e.oracle is None:
                # reference values without an oracle are only the smooth-target ones
                assert fx.problem.space.target.kind == "lp", (fx.name, e.check)


@pytest.mark.parametrize("fx", IN_SCOPE, ids=lambda f: f.name)
def test_oracles_confirm_expectations_then_library_matches(fx):
    probes = None
    for e in fx.expectations:
        if e.oracle is None:
            continue
        if probes is None:
            probes = _probes(fx)
        assert oracles.confirm(fx.raw, probes, e.oracle, e.check, e.args, e.value), (e.check, e.args)
    for r in verify_fixture(fx.name):
        assert r.ok, (r.check, r.args, r.expected, r.computed, r.error)


def test_out_of_scope_fixtures_are_stubs():
    stubs = [f for f in fixtures() if f.out_of_scope]
    assert {f.name for f in stubs} == {"vsnews", "normyevaluaci-3"}
    assert all(f.note and not f.expectations for f in stubs)


def test_compare_is_exact():
    assert compare("1/2", "2/4") and not compare("1/2", "0.5000001")
    assert compare({"a": "1"}, {"a": "1", "b": 2})
    assert not compare(1, "1") and not compare(True, 1)
    assert not compare(["1"], ["1", "2"])
    assert to_json([Fraction(1, 3), 2, True, None]) == ["1/3", 2, True, None]


def test_unknown_names_are_input_errors(monkeypatch):
    with pytest.raises(InputError):
        fixture("no-such-fixture")
    with pytest.raises(InputError):
        run_check(fixture("square").problem, "no_such_check")
    monkeypatch.setenv("CHOQUET_THREADS", "x")
    with pytest.raises(InputError):
        worker_count()
    monkeypatch.setenv("CHOQUET_THREADS", "3")
    assert worker_count() == 3
