"""Worked examples shipped as problem files with tables of expected results.

Each fixture in ``fixtures/*.json`` is a problem file (see :mod:`problem`)
plus an ``expect`` list.  An expectation names a *check* from
:data:`CHECKS`, its arguments, the exact expected value in JSON form
(rationals as ``"p/q"`` strings), where the value comes from
(``"source"``: ``"reference"`` for hand-derived values of the worked example,
``"derived"`` for values obtained by independent brute-force enumeration)
and the name of the brute-force oracle that recomputes it in the test suite.

Fixtures that cannot be expressed at finite scale are kept as stubs with
``"out_of_scope": true`` and a note.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

from .boundary import (
    boundary_conditions_report,
    choquet_boundary,
    hs_extreme,
    is_boundary_measure,
    operator_ball_extreme,
)
from .errors import ChoquetError, InputError
from .exactgeom import Subspace, fmt, qvec
from .function_space import (
    FunctionSpace,
    constants_status,
    evaluation_norms,
    hs_evaluation,
    point_image,
    structure_report,
    theta_collapses,
    weak_space,
)
from .normed_space import Side, dual_vertices, is_simplexoid, norm_value
from .orders import choquet_leq, n_mu_minimal, product_representation, t_star, w_map
from .problem import ProblemSpec, problem_from_dict
from .representation import (
    ScalarMeasure,
    VectorMeasure,
    ac_spaces,
    contains_measure,
    dilation_suite,
    functional_norm,
    l1_predual_check,
    representing_measures_at,
    representing_measures_scalar,
    vector_simplicial,
    weak_simplicial,
)


# ---------------------------------------------------------------------------
# canonical JSON values


def to_json(value: Any) -> Any:
    """Exact, canonical JSON form: rationals become ``"p/q"`` strings, counts stay integers."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, ScalarMeasure):
        return to_json(value.values)
    if isinstance(value, VectorMeasure):
        return to_json(value.values)
    if isinstance(value, Subspace):
        return {"dim": value.dim, "basis": to_json(value.basis)}
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    raise TypeError(f"no JSON form for {type(value).__name__}")


def _unordered(items) -> list:
    """A list compared as a set: canonical order by serialized form."""
    return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))


# ---------------------------------------------------------------------------
# checks


def _measure(H: FunctionSpace, rows) -> VectorMeasure:
    rows = [r if isinstance(r, list) else [r] for r in rows]
    if len(rows) != H.n:
        raise InputError(f"measure needs {H.n} rows")
    return VectorMeasure.of(rows)


def _ac_summary(sub: Subspace) -> dict:
    return {"dim": sub.dim, "basis": to_json(sub.basis)}


def _check_constants(H, P, a):
    return constants_status(H).value


def _check_constants_w(H, P, a):
    return weak_space(H).contains_constants


def _check_structure(H, P, a):
    r = structure_report(H, a["s"], a["t"])
    return {
        "separates": r.separates,
        "H_t": _ac_summary(r.H_t),
        "H_st": _ac_summary(r.H_st),
        "H_s_minus_t": _ac_summary(r.H_s_minus_t),
    }


def _check_point_image_dim(H, P, a):
    return point_image(H, H.index(a["point"])).dim


def _check_evaluation_norms(H, P, a):
    r = evaluation_norms(H, a["point"], qvec(a["x_star"]) if "x_star" in a else None)
    return {"phi_H": r.phi_H, "phi_Hw": r.phi_Hw, "phi_Hl": r.phi_Hl, "phi_Hs": r.phi_Hs}


def _check_theta(H, P, a):
    return [[s, t, str(alpha)] for s, t, alpha in theta_collapses(H)]


def _check_boundary(H, P, a):
    return list(choquet_boundary(H))


def _check_conditions_consistent(H, P, a):
    return all(boundary_conditions_report(H, t).consistent for t in H.points)


def _check_operator_ball_extreme(H, P, a):
    return operator_ball_extreme(H, H.index(a["point"]))


def _check_hs_same(H, P, a):
    t = H.index(a["point"])
    return hs_evaluation(H, t, qvec(a["x_star"])) == hs_evaluation(H, t, qvec(a["other"]))


def _check_hs_extreme(H, P, a):
    return hs_extreme(H, H.index(a["point"]), qvec(a["x_star"]))


def _check_dual_norm(H, P, a):
    return norm_value(H.target, qvec(a["x_star"]), Side.DUAL)


def _check_functional_norm(H, P, a):
    return functional_norm(H, H.functional_at(H.index(a["point"]), qvec(a["x_star"]))).value


def _check_representing(H, P, a):
    rs = representing_measures_at(H, a["point"], qvec(a["x_star"]))
    return _unordered(to_json(list(rs.vertices)))


def _check_scalar_representing(H, P, a):
    return _unordered(to_json(list(representing_measures_scalar(H, a["point"]).vertices)))


def _check_contains_measure(H, P, a):
    phi = H.functional_at(H.index(a["point"]), qvec(a["x_star"]))
    return contains_measure(H, phi, _measure(H, a["measure"]))


def _check_measure_mass(H, P, a):
    return _measure(H, a["measure"]).total_variation(H.target)


def _check_is_boundary_measure(H, P, a):
    return is_boundary_measure(H, _measure(H, a["measure"]))


def _check_weak(H, P, a):
    v = weak_simplicial(H)
    out = {"status": v.status.value}
    if v.witness is not None:
        out["witness"] = _unordered(to_json([v.witness.first, v.witness.second]))
    return out


def _check_vector(H, P, a):
    v = vector_simplicial(H, extras=P.extras)
    out = {"status": v.status.value}
    if v.witness is not None:
        out["witness"] = _unordered(to_json([v.witness.first, v.witness.second]))
    return out


def _check_ac(H, P, a):
    ac = ac_spaces(H, extras=P.extras)
    H_sub = H.subspace()
    acw, acv = ac.ac_w, ac.ac_v_upper
    if acw == acv:
        rel = "equal"
    elif acv <= acw:
        rel = "upper_inside_w"
    elif acw <= acv:
        rel = "w_inside_upper"
    else:
        rel = "incomparable"
    return {
        "ac_w": _ac_summary(acw),
        "ac_v_upper": _ac_summary(acv),
        "ac_v_upper_equals_H": acv == H_sub,
        "relation": rel,
        "ac_v_upper_w_dim": ac.ac_v_upper_w.dim,
    }


def _stated_subspace(H, arrays) -> Subspace:
    rows = [qvec(x for row in c for x in (row if isinstance(row, list) else [row])) for c in arrays]
    return Subspace.kernel(rows, H.n * H.d)


def _check_ac_w_equals(H, P, a):
    return ac_spaces(H, extras=P.extras).ac_w == _stated_subspace(H, a["constraints"])


def _check_ac_v_upper_equals(H, P, a):
    return ac_spaces(H, extras=P.extras).ac_v_upper == _stated_subspace(H, a["constraints"])


def _check_dilation(H, P, a):
    suite = dilation_suite(H)
    return {"D": to_json(suite.D), "checks": {k: v for k, v in vars(suite.checks).items()}}


def _check_l1_predual(H, P, a):
    r = l1_predual_check(H)
    return {"acw": r.acw_is_l1_predual, "E": r.E_is_l1_predual, "weak": r.weakly_simplicial}


def _check_simplexoid(H, P, a):
    return is_simplexoid(H.target)


def _check_dual_vertex_count(H, P, a):
    return len(dual_vertices(H.target))


def _check_product(H, P, a):
    r = product_representation(H, H.functional_at(H.index(a["point"]), qvec(a["x_star"])))
    atoms = [[H.points[t], to_json(x), to_json(m)] for t, x, m in r.measure.atoms]
    return {"mass": to_json(r.mass), "atoms": _unordered(atoms)}


def _check_n_mu_unique(H, P, a):
    return n_mu_minimal(H, _measure(H, a["measure"])).unique


def _check_w_roundtrip(H, P, a):
    mu = _measure(H, a["measure"])
    return t_star(w_map(mu, H.target)) == mu


def _check_choquet_leq(H, P, a):
    return choquet_leq(weak_space(H), qvec(a["first"]), qvec(a["second"]))


CHECKS: dict[str, Callable[[FunctionSpace, ProblemSpec, dict], Any]] = {
    "constants": _check_constants,
    "constants_w": _check_constants_w,
    "structure": _check_structure,
    "point_image_dim": _check_point_image_dim,
    "evaluation_norms": _check_evaluation_norms,
    "theta_collapses": _check_theta,
    "choquet_boundary": _check_boundary,
    "boundary_conditions_consistent": _check_conditions_consistent,
    "operator_ball_extreme": _check_operator_ball_extreme,
    "hs_same": _check_hs_same,
    "hs_extreme": _check_hs_extreme,
    "dual_norm": _check_dual_norm,
    "functional_norm": _check_functional_norm,
    "representing_measures": _check_representing,
    "scalar_representing_measures": _check_scalar_representing,
    "contains_measure": _check_contains_measure,
    "measure_mass": _check_measure_mass,
    "is_boundary_measure": _check_is_boundary_measure,
    "weak_simplicial": _check_weak,
    "vector_simplicial": _check_vector,
    "ac_spaces": _check_ac,
    "ac_w_equals": _check_ac_w_equals,
    "ac_v_upper_equals": _check_ac_v_upper_equals,
    "dilation": _check_dilation,
    "l1_predual": _check_l1_predual,
    "is_simplexoid": _check_simplexoid,
    "dual_vertex_count": _check_dual_vertex_count,
    "product_representation": _check_product,
    "n_mu_unique": _check_n_mu_unique,
    "w_roundtrip": _check_w_roundtrip,
    "choquet_leq": _check_choquet_leq,
}


def compare(expected: Any, computed: Any) -> bool:
    """Exact comparison of JSON values; a dict expectation may list a subset of keys."""
    if isinstance(expected, dict) and isinstance(computed, dict):
        return all(k in computed and compare(v, computed[k]) for k, v in expected.items())
    if isinstance(expected, list) and isinstance(computed, list):
        return len(expected) == len(computed) and all(compare(e, c) for e, c in zip(expected, computed))
    if isinstance(expected, str) and isinstance(computed, str):
        if expected == computed:
            return True
        try:
            return Fraction(expected) == Fraction(computed)
        except ValueError:
            return False
    return expected == computed and type(expected) is type(computed)


def run_check(problem: ProblemSpec, check: str, args: dict | None = None) -> Any:
    if check not in CHECKS:
        raise InputError(f"unknown check {check!r}")
    return to_json(CHECKS[check](problem.space, problem, args or {}))


# ---------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class Expectation:
    check: str
    args: dict
    value: Any
    source: str
    oracle: str | None
    note: str = ""


@dataclass(frozen=True)
class Fixture:
    name: str
    problem: ProblemSpec | None
    expectations: tuple[Expectation, ...] = ()
    note: str = ""
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def out_of_scope(self) -> bool:
        return self.problem is None


def _fixture_from_dict(doc: dict, text: str = "") -> Fixture:
    name = doc["name"]
    if doc.get("out_of_scope"):
        return Fixture(name, None, (), doc.get("note", ""), doc)
    problem = problem_from_dict(doc, text)
    exps = []
    for e in doc.get("expect", []):
        if e.get("source") not in ("reference", "derived"):
            raise InputError(f"{name}: expectation source must be 'reference' or 'derived'")
        exps.append(Expectation(e["check"], e.get("args", {}), e["value"], e["source"], e.get("oracle"),
                                e.get("note", "")))
    return Fixture(name, problem, tuple(exps), doc.get("note", ""), doc)


@lru_cache(maxsize=1)
def fixtures() -> tuple[Fixture, ...]:
    """All shipped fixtures, sorted by name."""
    out = []
    for entry in resources.files("choquet_lab").joinpath("fixtures").iterdir():
        if entry.name.endswith(".json"):
            text = entry.read_text(encoding="utf-8")
            out.append(_fixture_from_dict(json.loads(text), text))
    return tuple(sorted(out, key=lambda f: f.name))


def fixture(name: str) -> Fixture:
    for f in fixtures():
        if f.name == name:
            return f
    raise InputError(f"unknown fixture {name!r}")


@dataclass(frozen=True)
class CheckResult:
    fixture: str
    check: str
    args: dict
    expected: Any
    computed: Any
    ok: bool
    source: str
    error: str | None = None


def verify_fixture(name: str) -> list[CheckResult]:
    fx = fixture(name)
    out = []
    for e in fx.expectations:
        try:
            got = run_check(fx.problem, e.check, e.args)
            out.append(CheckResult(name, e.check, e.args, e.value, got, compare(e.value, got), e.source))
        except ChoquetError as exc:
            out.append(CheckResult(name, e.check, e.args, e.value, None, False, e.source, str(exc)))
    return out


def worker_count() -> int:
    """Worker processes for corpus runs: ``CHOQUET_THREADS`` (default 1)."""
    raw = os.environ.get("CHOQUET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"CHOQUET_THREADS must be an integer, got {raw!r}") from None


def verify_corpus(name: str | None = None, workers: int | None = None) -> list[CheckResult]:
    """Run every expectation (of one fixture when ``name`` is given); results in fixture order."""
    names = [name] if name is not None else [f.name for f in fixtures() if not f.out_of_scope]
    if name is not None and fixture(name).out_of_scope:
        return []
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(names) <= 1:
        groups = [verify_fixture(n) for n in names]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(names))) as pool:
            groups = list(pool.map(verify_fixture, names))
    return [r for g in groups for r in g]


__all__ = [
    "CHECKS",
    "CheckResult",
    "Expectation",
    "Fixture",
    "compare",
    "fixture",
    "fixtures",
    "run_check",
    "to_json",
    "verify_corpus",
    "verify_fixture",
]
