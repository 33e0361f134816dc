"""Problem files: one JSON document describing a finite function space.

Layout (rationals are integers or ``"p/q"`` strings, points are strings)::

    {
      "name": "example",
      "points": ["-1", "0", "1"],
      "target": {"kind": "linf", "dim": 2},
      "constraints": [ [[0, -1], [1, 1], [-1, 0]] ],
      "probes": [{"point": "0", "functional": ["1", "1"]}],
      "functionals": {"phi": ["1", "0", "2"]}
    }

``target`` is ``{"kind": "linf"|"l1", "dim": d}``, ``{"kind": "lp", "dim": d,
"p": "3/2"}`` or ``{"kind": "polyhedral", "vertices": [[...], ...]}``.  The
space is given by exactly one of ``constraints`` (n x d arrays whose common
kernel is H), ``basis`` (n x d arrays spanning H) or ``"full": true``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ChoquetError, InputError
from .exactgeom import Vector, fmt
from .function_space import FunctionSpace
from .normed_space import NormSpec


class ProblemError(InputError):
    """A problem file that does not parse or does not fit the schema."""

    def __init__(self, message: str, path: str = "$", line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{path}: {message}{where}")
        self.path, self.line, self.column = path, line, column


@dataclass(frozen=True)
class ProbeSpec:
    point: str
    functional: Vector


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    space: FunctionSpace
    probes: tuple[ProbeSpec, ...] = ()
    functionals: dict[str, Vector] = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def extras(self) -> tuple[tuple[str, Vector], ...]:
        return tuple((p.point, p.functional) for p in self.probes)


def _position(text: str, token: str) -> tuple[int | None, int | None]:
    """Line and column of the first occurrence of ``token`` in the source."""
    if not text:
        return None, None
    i = text.find(token)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, path: str, value: Any = None):
        line = col = None
        if value is not None:
            line, col = _position(self.text, json.dumps(value))
        raise ProblemError(message, path, line, col)

    def rational(self, v, path: str) -> Fraction:
        if isinstance(v, bool) or isinstance(v, float):
            self.fail("rationals must be integers or 'p/q' strings", path, v)
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            try:
                return Fraction(v.strip())
            except (ValueError, ZeroDivisionError):
                self.fail(f"cannot read {v!r} as a rational", path, v)
        self.fail(f"expected a rational, got {type(v).__name__}", path, v)

    def vector(self, v, path: str, length: int | None = None) -> Vector:
        if not isinstance(v, list):
            self.fail("expected a list", path, v)
        out = tuple(self.rational(x, f"{path}[{i}]") for i, x in enumerate(v))
        if length is not None and len(out) != length:
            self.fail(f"expected {length} entries, got {len(out)}", path, v)
        return out

    def array(self, v, path: str, n: int, d: int) -> list[Vector]:
        if not isinstance(v, list) or len(v) != n:
            self.fail(f"expected an array with one row per point ({n})", path, v)
        rows = []
        for i, row in enumerate(v):
            if d == 1 and not isinstance(row, list):
                row = [row]
            rows.append(self.vector(row, f"{path}[{i}]", d))
        return rows

    def target(self, v, path: str) -> NormSpec:
        if not isinstance(v, dict) or "kind" not in v:
            self.fail("target must be an object with a 'kind'", path)
        kind = v["kind"]
        try:
            if kind in ("linf", "l1"):
                d = v.get("dim")
                if not isinstance(d, int) or isinstance(d, bool):
                    self.fail("'dim' must be a positive integer", f"{path}.dim", d)
                return NormSpec.linf(d) if kind == "linf" else NormSpec.l1(d)
            if kind == "lp":
                return NormSpec.lp(v.get("dim"), self.rational(v.get("p"), f"{path}.p"))
            if kind == "polyhedral":
                verts = v.get("vertices")
                if not isinstance(verts, list) or not verts:
                    self.fail("'vertices' must be a nonempty list", f"{path}.vertices")
                vs = [self.vector(x, f"{path}.vertices[{i}]") for i, x in enumerate(verts)]
                return NormSpec.polyhedral(vs)
        except ProblemError:
            raise
        except (ChoquetError, TypeError) as exc:
            self.fail(str(exc), path)
        self.fail(f"unknown norm kind {kind!r}", f"{path}.kind", kind)


def parse_problem(text: str, source: str = "<string>") -> ProblemSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(exc.msg, source, exc.lineno, exc.colno) from None
    return problem_from_dict(doc, text)


def problem_from_dict(doc: dict, text: str = "") -> ProblemSpec:
    r = _Reader(text)
    if not isinstance(doc, dict):
        r.fail("a problem is a JSON object", "$")
    pts = doc.get("points")
    if not isinstance(pts, list) or not pts:
        r.fail("'points' must be a nonempty list", "$.points")
    points = []
    for i, p in enumerate(pts):
        if isinstance(p, bool) or not isinstance(p, (str, int)):
            r.fail("points are strings", f"$.points[{i}]", p)
        points.append(str(p))
    if len(set(points)) != len(points):
        r.fail("point labels must be distinct", "$.points")
    if "target" not in doc:
        r.fail("missing 'target'", "$")
    target = r.target(doc["target"], "$.target")
    n, d = len(points), target.dim
    given = [k for k in ("constraints", "basis", "full") if k in doc]
    if len(given) != 1:
        r.fail("give exactly one of 'constraints', 'basis' or 'full'", "$")
    key = given[0]
    try:
        if key == "full":
            if doc["full"] is not True:
                r.fail("'full' must be true", "$.full")
            space = FunctionSpace.full(points, target)
        else:
            items = doc[key]
            if not isinstance(items, list):
                r.fail("expected a list of arrays", f"$.{key}")
            arrays = [r.array(a, f"$.{key}[{i}]", n, d) for i, a in enumerate(items)]
            flat = [tuple(x for row in a for x in row) for a in arrays]
            if key == "constraints":
                space = FunctionSpace.from_constraints(points, target, arrays)
            else:
                space = FunctionSpace.spanned_by(points, target, flat)
    except ProblemError:
        raise
    except ChoquetError as exc:
        r.fail(str(exc), f"$.{key}")
    probes = []
    for i, p in enumerate(doc.get("probes", [])):
        path = f"$.probes[{i}]"
        if not isinstance(p, dict) or "point" not in p or "functional" not in p:
            r.fail("a probe is {'point': ..., 'functional': [...]}", path)
        if str(p["point"]) not in points:
            r.fail(f"unknown point {p['point']!r}", f"{path}.point", p["point"])
        probes.append(ProbeSpec(str(p["point"]), r.vector(p["functional"], f"{path}.functional", d)))
    functionals = {}
    for name, v in (doc.get("functionals") or {}).items():
        functionals[name] = r.vector(v, f"$.functionals.{name}", space.m)
    return ProblemSpec(str(doc.get("name", "problem")), space, tuple(probes), functionals, doc)


def load_problem(path: str | Path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_problem(text, str(path))


def target_to_dict(spec: NormSpec) -> dict:
    if spec.kind in ("linf", "l1"):
        return {"kind": spec.kind, "dim": spec.dim}
    if spec.kind == "lp":
        return {"kind": "lp", "dim": spec.dim, "p": fmt(spec.p)}
    return {"kind": "polyhedral", "vertices": [[fmt(x) for x in v] for v in spec.ball_vertices]}


def problem_to_dict(spec: ProblemSpec) -> dict:
    """Serialize with an explicit basis (the canonical one); round-trips exactly."""
    H = spec.space
    doc = {
        "name": spec.name,
        "points": list(H.points),
        "target": target_to_dict(H.target),
        "basis": [[[fmt(f[s * H.d + i]) for i in range(H.d)] for s in range(H.n)] for f in H.basis],
    }
    if spec.probes:
        doc["probes"] = [{"point": p.point, "functional": [fmt(x) for x in p.functional]} for p in spec.probes]
    if spec.functionals:
        doc["functionals"] = {k: [fmt(x) for x in v] for k, v in spec.functionals.items()}
    return doc


def dump_problem(spec: ProblemSpec) -> str:
    return json.dumps(problem_to_dict(spec), indent=2) + "\n"
