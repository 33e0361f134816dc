"""Command-line front end: ``choquet <command> [options] PROBLEM.json``.

Exit codes: 0 computed and every internal cross-check passed; 1 computed
with a ``Fails`` verdict (a counterexample is in the report) or a failed
corpus expectation; 2 input error or unsupported feature.

Reports are deterministic: the body (table or ``--json``) depends only on
the input.  Timing goes to standard error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .boundary import boundary_conditions_report, choquet_boundary
from .corpus import to_json, verify_corpus, fixture as corpus_fixture
from .errors import ChoquetError, InputError, SmoothNormUnsupported
from .exactgeom import fmt, qvec
from .function_space import constants_status, weak_space
from .orders import (
    choquet_leq,
    maximality_check,
    n_mu_compare,
    n_mu_minimal,
    product_representation,
    t_star,
    w_map,
)
from .problem import ProblemSpec, load_problem
from .representation import (
    Probe,
    Status,
    VectorMeasure,
    ac_spaces,
    default_probes,
    dilation_suite,
    functional_norm,
    functional_vector_simplicial,
    functional_weak_simplicial,
    representing_measures_at,
    representing_measures_scalar,
    representing_measures_vector,
    vector_simplicial,
    weak_simplicial,
)

EXIT_OK, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


@dataclass
class Report:
    """What a command computed: JSON-ready results plus tables for the text form."""

    command: str
    digest: str
    results: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)  # (title, header, rows)
    exit_code: int = EXIT_OK

    def table(self, title: str, header: Sequence[str], rows) -> None:
        self.tables.append((title, tuple(header), [tuple(str(c) for c in r) for r in rows]))

    def to_dict(self) -> dict:
        return {"command": self.command, "input_sha256": self.digest, "results": to_json(self.results)}

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def render_text(self) -> str:
        out = [f"{self.command}  (input sha256 {self.digest[:16]})"]
        for title, header, rows in self.tables:
            out.append("")
            out.append(title)
            widths = [len(h) for h in header]
            for r in rows:
                widths = [max(w, len(c)) for w, c in zip(widths, r)]
            line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
            out.append("  " + line(header))
            out.append("  " + line(["-" * w for w in widths]))
            out.extend("  " + line(r) for r in rows)
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_vector(text: str, what: str = "vector") -> tuple[Fraction, ...]:
    """``"1,-1/2,3"`` -> exact rationals."""
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read {what} {text!r}: use comma-separated integers or p/q") from None


def parse_measure(text: str, H) -> VectorMeasure:
    """Rows separated by ``;``, entries by ``,`` (one row per point)."""
    rows = [parse_vector(r, "measure row") for r in text.split(";")]
    if len(rows) != H.n or any(len(r) != H.d for r in rows):
        raise InputError(f"a measure needs {H.n} rows of {H.d} entries")
    return VectorMeasure.of(rows)


def parse_scalar_measure(text: str, H) -> tuple[Fraction, ...]:
    v = parse_vector(text, "scalar measure")
    if len(v) != H.n:
        raise InputError(f"a scalar measure needs {H.n} entries")
    return v


def load_probes(path: str, H) -> list[Probe]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: cannot read probes: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    if not isinstance(doc, list):
        raise InputError(f"{path}: probes are a list of {{'point': ..., 'functional': [...]}}")
    out = []
    for i, p in enumerate(doc):
        if not isinstance(p, dict) or "point" not in p or "functional" not in p:
            raise InputError(f"{path}[{i}]: a probe is {{'point': ..., 'functional': [...]}}")
        x = qvec(p["functional"])
        if len(x) != H.d:
            raise InputError(f"{path}[{i}].functional: expected {H.d} entries")
        out.append(Probe(H.index(str(p["point"])), x))
    return out


def _functional(args, P: ProblemSpec):
    """The functional named by ``--point``/``--functional``: values on the basis of H."""
    H = P.space
    if args.functional is None:
        raise InputError("--functional is required")
    if args.point is not None:
        x = parse_vector(args.functional, "functional")
        if len(x) != H.d:
            raise InputError(f"--functional needs {H.d} entries with --point")
        return H.functional_at(H.index(args.point), x), f"{args.functional} o phi_H({args.point})"
    if args.functional in P.functionals:
        return P.functionals[args.functional], args.functional
    phi = parse_vector(args.functional, "functional")
    if len(phi) != H.m:
        raise InputError(f"without --point, --functional is a named functional or {H.m} values on the basis of H")
    return phi, args.functional


def _rows(m) -> str:
    return "; ".join(",".join(fmt(x) for x in row) for row in m)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    weak = weak_simplicial(H)
    rows = [
        ("points", " ".join(H.points)),
        ("target", H.target.describe()),
        ("dim H", H.m),
        ("constants", constants_status(H).value),
        ("constants in H_w", weak_space(H).contains_constants),
        ("Choquet boundary", " ".join(choquet_boundary(H))),
        ("weakly simplicial", weak.status.value),
    ]
    R.results.update({
        "points": list(H.points), "target": H.target.describe(), "dim": H.m,
        "constants": constants_status(H).value, "constants_w": weak_space(H).contains_constants,
        "choquet_boundary": list(choquet_boundary(H)), "weak_simplicial": weak.status.value,
    })
    statuses = [weak.status]
    try:
        vec = vector_simplicial(H, extras=P.extras)
        rows.append(("vector simplicial", vec.status.value))
        R.results["vector_simplicial"] = vec.status.value
        statuses.append(vec.status)
    except SmoothNormUnsupported as exc:
        rows.append(("vector simplicial", f"unsupported ({exc.operation})"))
    R.table("summary", ("property", "value"), rows)
    if Status.FAILS in statuses:
        R.exit_code = EXIT_FAILS


def cmd_boundary(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    ch = choquet_boundary(H)
    R.results["choquet_boundary"] = list(ch)
    R.table("Choquet boundary", ("point",), [(c,) for c in ch])
    if not H.target.polyhedral_kind:
        return
    pts = [args.point] if args.point is not None else list(H.points)
    rows, conds = [], {}
    for t in pts:
        c = boundary_conditions_report(H, t)
        opt = lambda v: "-" if v is None else v  # noqa: E731
        rows.append((c.point, c.cond1, c.cond2, c.cond3, c.cond4, opt(c.cond5), opt(c.operator_ball_extreme),
                     c.consistent))
        conds[c.point] = {"cond1": c.cond1, "cond2": c.cond2, "cond3": c.cond3, "cond4": c.cond4,
                          "cond5": c.cond5, "operator_ball_extreme": c.operator_ball_extreme,
                          "consistent": c.consistent}
    R.results["conditions"] = conds
    R.table("boundary conditions", ("point", "1", "2", "3", "4", "5", "op-ball", "consistent"), rows)
    if not all(v["consistent"] for v in conds.values()):
        R.exit_code = EXIT_FAILS


def cmd_represent(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    mode = args.mode or ("scalar" if args.functional is None else "vector")
    if mode == "scalar":
        if args.point is None:
            raise InputError("represent --mode scalar needs --point")
        rs = representing_measures_scalar(H, args.point)
        R.results.update({"mode": "scalar", "point": args.point, "vertices": list(rs.vertices)})
        R.table(f"representing probabilities of phi_Hw({args.point})", ("#", "measure"),
                [(i, ",".join(map(fmt, m.values))) for i, m in enumerate(rs.vertices)])
        return
    if mode != "vector":
        raise InputError(f"unknown --mode {mode!r} for represent (scalar | vector)")
    if args.point is not None and args.functional is not None:
        rs = representing_measures_at(H, args.point, parse_vector(args.functional, "functional"))
        label = f"{args.functional} o phi_H({args.point})"
    else:
        phi, label = _functional(args, P)
        rs = representing_measures_vector(H, phi)
    R.results.update({"mode": "vector", "functional": label, "norm": rs.norm,
                      "complete": rs.complete, "vertices": [m.values for m in rs.vertices]})
    R.table(f"representing measures of {label}", ("property", "value"),
            [("norm", "-" if rs.norm is None else fmt(rs.norm)), ("complete", rs.complete),
             ("vertices", len(rs.vertices))]
            + ([] if rs.complete else [("note", "certified subset only; other measures may exist")]))
    R.table("vertices (rows per point)", ("#", "measure"), [(i, _rows(m.values)) for i, m in enumerate(rs.vertices)])


def _verdict(R: Report, v) -> None:
    R.results.update({"kind": v.kind.value, "status": v.status.value, "probes": list(v.probe_log),
                      "reason": v.reason, "undecided": list(v.undecided)})
    rows = [("kind", v.kind.value), ("status", v.status.value)]
    if v.reason:
        rows.append(("reason", v.reason))
    if v.witness is not None:
        w = v.witness
        R.results["witness"] = {"label": w.label, "target": w.target, "first": w.first.values,
                                "second": w.second.values}
        show = lambda m: _rows(m.values) if isinstance(m, VectorMeasure) else ",".join(map(fmt, m.values))  # noqa
        rows += [("witness at", w.label), ("target", ",".join(map(fmt, w.target))),
                 ("first", show(w.first)), ("second", show(w.second))]
        R.exit_code = EXIT_FAILS
    R.table("verdict", ("property", "value"), rows)
    R.table("probe log", ("#", "entry"), list(enumerate(v.probe_log)))


def cmd_simplicial(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    mode = args.mode or "weak"
    probes = load_probes(args.probes, H) if args.probes else None
    if mode == "weak":
        v = weak_simplicial(H)
    elif mode == "vector":
        v = vector_simplicial(H, probes, extras=P.extras)
    elif mode == "functional-weak":
        v = functional_weak_simplicial(H)
    elif mode == "functional-vector":
        extra = list(probes) if probes is not None else default_probes(H, P.extras)
        v = functional_vector_simplicial(H, list(P.functionals.values()), extra)
    else:
        raise InputError(f"unknown --mode {mode!r} (weak | vector | functional-weak | functional-vector)")
    _verdict(R, v)


def cmd_affine(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    probes = load_probes(args.probes, H) if args.probes else None
    ac = ac_spaces(H, probes, extras=P.extras)
    Hs = H.subspace()
    R.results.update({"ac_w": ac.ac_w, "ac_v_upper": ac.ac_v_upper, "ac_v_upper_equals_H": ac.ac_v_upper == Hs,
                      "ac_v_upper_w_dim": ac.ac_v_upper_w.dim, "ac_v_certified_negative": ac.ac_v_certified_negative})
    R.table("spaces of affine functions", ("space", "dim", "contains H", "equals H"), [
        ("A_c^w(H)", ac.ac_w.dim, Hs <= ac.ac_w, ac.ac_w == Hs),
        ("A_c^v(H) upper bound", ac.ac_v_upper.dim, Hs <= ac.ac_v_upper, ac.ac_v_upper == Hs),
        ("(A_c^v upper)_w", ac.ac_v_upper_w.dim, "-", "-"),
    ])
    for name, sub in (("A_c^w(H) basis", ac.ac_w), ("A_c^v(H) upper bound basis", ac.ac_v_upper)):
        R.table(name, ("#", "function (rows per point)"),
                [(i, _rows([b[s * H.d:(s + 1) * H.d] for s in range(H.n)])) for i, b in enumerate(sub.basis)])


def cmd_dilate(args, P: ProblemSpec, R: Report) -> None:
    suite = dilation_suite(P.space)
    checks = dict(vars(suite.checks))
    R.results.update({"D": suite.D, "checks": checks})
    R.table("dilation matrix D (row t = boundary probability of t)", ("point", "row"),
            [(t, ",".join(map(fmt, row))) for t, row in zip(P.space.points, suite.D)])
    R.table("checks", ("check", "holds"), sorted(checks.items()))
    if not suite.checks.all:
        R.exit_code = EXIT_FAILS


def cmd_order(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    Hw = weak_space(H)
    rows = []
    if args.first is not None or args.second is not None:
        if args.first is None or args.second is None:
            raise InputError("order needs both --first and --second")
        a, b = parse_scalar_measure(args.first, H), parse_scalar_measure(args.second, H)
        leq, geq = choquet_leq(Hw, a, b), choquet_leq(Hw, b, a)
        R.results.update({"first_leq_second": leq, "second_leq_first": geq})
        rows += [("first < second", leq), ("second < first", geq)]
    if args.measure is not None:
        rep = maximality_check(Hw, parse_scalar_measure(args.measure, H))
        R.results.update({"carried_by_boundary": rep.carried_by_boundary, "envelope_test": rep.envelope_test})
        rows += [("carried by boundary", rep.carried_by_boundary), ("envelope test", rep.envelope_test)]
        if not rep.agree:
            R.exit_code = EXIT_FAILS
    if not rows:
        raise InputError("order needs --first/--second or --measure")
    R.table("Choquet order on H_w", ("question", "answer"), rows)


def cmd_nmu(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    if args.measure is not None:
        mu = parse_measure(args.measure, H)
    elif args.point is not None and args.functional is not None:
        x = parse_vector(args.functional, "functional")
        if len(x) != H.d:
            raise InputError(f"--functional needs {H.d} entries")
        rows = [[0] * H.d for _ in range(H.n)]
        rows[H.index(args.point)] = list(x)
        mu = VectorMeasure.of(rows)
    else:
        raise InputError("nmu needs --measure, or --point with --functional")
    res = n_mu_minimal(H, mu)
    canonical = w_map(mu, H.target)
    atoms = lambda nu: [[H.points[t], x, m] for t, x, m in nu.atoms]  # noqa: E731
    R.results.update({"measure": mu.values, "unique": res.unique, "minimal": atoms(res.minimal),
                      "alternative": atoms(res.alternative) if res.alternative else None,
                      "canonical_lift": atoms(canonical),
                      "minimal_vs_lift": n_mu_compare(H, mu, res.minimal, canonical).value,
                      "roundtrip": t_star(canonical) == mu})
    R.table("minimal elements of N(mu)", ("property", "value"), [
        ("unique", res.unique), ("minimal", res.minimal.describe(H.points)),
        ("alternative", res.alternative.describe(H.points) if res.alternative else "-"),
        ("canonical lift", canonical.describe(H.points)),
        ("minimal vs lift", R.results["minimal_vs_lift"]), ("T* of lift = mu", R.results["roundtrip"]),
    ])


def cmd_product_rep(args, P: ProblemSpec, R: Report) -> None:
    H = P.space
    phi, label = _functional(args, P)
    rep = product_representation(H, phi)
    norm = functional_norm(H, phi).value
    R.results.update({"functional": label, "mass": rep.mass, "norm": norm,
                      "atoms": [[H.points[t], x, m] for t, x, m in rep.measure.atoms]})
    R.table(f"product representation of {label}", ("property", "value"),
            [("mass", fmt(rep.mass)), ("functional norm", fmt(norm)), ("atoms", len(rep.measure.atoms))])
    R.table("atoms", ("point", "dual vertex", "mass"),
            [(H.points[t], ",".join(map(fmt, x)), fmt(m)) for t, x, m in rep.measure.atoms])


def cmd_verify_corpus(args, R: Report) -> None:
    if args.fixture is not None:
        corpus_fixture(args.fixture)  # unknown names are input errors
    results = verify_corpus(args.fixture)
    R.results["checks"] = [{"fixture": r.fixture, "check": r.check, "args": r.args, "ok": r.ok,
                            "expected": r.expected, "computed": r.computed, "error": r.error} for r in results]
    R.results["passed"] = sum(r.ok for r in results)
    R.results["total"] = len(results)
    R.table("corpus", ("fixture", "check", "args", "result"),
            [(r.fixture, r.check, json.dumps(r.args, sort_keys=True) if r.args else "",
              "ok" if r.ok else "MISMATCH") for r in results])
    bad = [r for r in results if not r.ok]
    if bad:
        R.table("mismatches", ("fixture", "check", "expected", "computed"),
                [(r.fixture, r.check, json.dumps(r.expected), r.error or json.dumps(r.computed)) for r in bad])
        R.exit_code = EXIT_FAILS


COMMANDS = {
    "analyze": (cmd_analyze, "summary: constants, boundary, simpliciality"),
    "boundary": (cmd_boundary, "Choquet boundary and the equivalent boundary conditions"),
    "represent": (cmd_represent, "vertices of a representing set"),
    "simplicial": (cmd_simplicial, "simpliciality verdicts with witnesses"),
    "affine": (cmd_affine, "the spaces A_c^w(H) and the A_c^v(H) upper bound"),
    "dilate": (cmd_dilate, "dilation matrix and its checks"),
    "order": (cmd_order, "Choquet order and maximality of scalar measures"),
    "nmu": (cmd_nmu, "minimal lifts of a vector measure to K x B_E*"),
    "product-rep": (cmd_product_rep, "minimal-mass product representation of a functional"),
    "verify-corpus": (None, "check every shipped fixture against its expected values"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="choquet", description="Exact analysis of finite vector-valued function spaces.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        if name == "verify-corpus":
            p.add_argument("--fixture", help="run a single fixture")
            continue
        p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--point", help="point label")
        p.add_argument("--functional", help="dual vector 'a,b,..' (with --point), values on the basis, or a name")
        p.add_argument("--mode", help="scalar|vector (represent); weak|vector|functional-weak|functional-vector")
        p.add_argument("--probes", metavar="FILE", help="JSON list of {'point', 'functional'} probes")
        p.add_argument("--measure", help="measure: rows ';'-separated, entries ','-separated")
        p.add_argument("--first", help="first scalar measure (order)")
        p.add_argument("--second", help="second scalar measure (order)")
    return ap


def run(args: argparse.Namespace) -> tuple[Report | None, int, str]:
    """Execute parsed arguments; returns (report, exit code, error message)."""
    try:
        if args.command == "verify-corpus":
            R = Report("verify-corpus", hashlib.sha256((args.fixture or "*").encode()).hexdigest())
            cmd_verify_corpus(args, R)
            return R, R.exit_code, ""
        P = load_problem(args.problem)
        digest = hashlib.sha256(Path(args.problem).read_bytes()).hexdigest()
        R = Report(args.command, digest)
        COMMANDS[args.command][0](args, P, R)
        return R, R.exit_code, ""
    except SmoothNormUnsupported as exc:
        return None, EXIT_ERROR, f"unsupported: {exc} (operation {exc.operation})"
    except ChoquetError as exc:
        return None, EXIT_ERROR, f"error: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report, code, message = run(args)
    if report is not None:
        sys.stdout.write(report.render_json() if args.json else report.render_text())
    if message:
        print(message, file=sys.stderr)
    print(f"elapsed {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

