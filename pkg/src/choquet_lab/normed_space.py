"""Norms on Q^d: polyhedral balls, their polar dual balls, and smooth l_p.

Polyhedral norms are described by the vertices of the unit ball; the dual
ball is its polar.  Smooth l_p norms (1 < p < oo) carry no polytope and are
only used through the strictly-convex-dual reduction elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DegenerateInput, NotOnSphere, SmoothNormUnsupported
from .exactgeom import (
    ONE,
    ZERO,
    Polytope,
    Vector,
    affine_dim,
    dot,
    extreme_points,
    facet_enumeration,
    lp_solve,
    q,
    qvec,
    rank,
    unit,
    vertex_enumeration,
)


class Side(str, Enum):
    PRIMAL = "Primal"
    DUAL = "Dual"


@dataclass(frozen=True)
class NormSpec:
    """A norm on Q^d.

    ``kind`` is one of ``"linf"``, ``"l1"``, ``"polyhedral"`` (unit ball given
    by ``ball_vertices``) or ``"lp"`` (with exponent ``p``).
    """

    dim: int
    kind: str
    ball_vertices: tuple[Vector, ...] = ()
    p: Fraction | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise DegenerateInput("norm dimension must be positive")
        if self.kind not in ("linf", "l1", "polyhedral", "lp"):
            raise DegenerateInput(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or not (1 < self.p):
                raise DegenerateInput("l_p norms need a rational p in (1, oo)")
        if self.kind == "polyhedral":
            vs = set(self.ball_vertices)
            if any(len(v) != self.dim for v in vs):
                raise DegenerateInput("ball vertex of the wrong length")
            if any(tuple(-x for x in v) not in vs for v in vs):
                raise DegenerateInput("polyhedral ball must be symmetric")
            if rank(list(vs)) < self.dim:
                raise DegenerateInput("polyhedral ball must span the space")

    @classmethod
    def linf(cls, d: int) -> "NormSpec":
        return cls(d, "linf")

    @classmethod
    def l1(cls, d: int) -> "NormSpec":
        return cls(d, "l1")

    @classmethod
    def polyhedral(cls, vertices) -> "NormSpec":
        vs = [qvec(v) for v in vertices]
        return cls(len(vs[0]), "polyhedral", tuple(extreme_points(vs)))

    @classmethod
    def lp(cls, d: int, p) -> "NormSpec":
        return cls(d, "lp", (), q(p))

    @property
    def smooth_dual(self) -> bool:
        return self.kind == "lp"

    @property
    def polyhedral_kind(self) -> bool:
        return self.kind != "lp"

    @property
    def conjugate(self) -> Fraction:
        """Conjugate exponent q of an l_p norm."""
        return self.p / (self.p - 1)

    def primal_vertices(self) -> tuple[Vector, ...]:
        return _primal_vertices(self)

    def describe(self) -> str:
        if self.kind == "lp":
            return f"l_{self.p}^{self.dim}"
        if self.kind == "polyhedral":
            return f"polyhedral norm on R^{self.dim} ({len(self.ball_vertices)} ball vertices)"
        return f"{self.kind}^{self.dim}"


@lru_cache(maxsize=None)
def _primal_vertices(spec: NormSpec) -> tuple[Vector, ...]:
    d = spec.dim
    if spec.kind == "linf":
        return tuple(sorted(tuple(Fraction(s) for s in signs) for signs in itertools.product((-1, 1), repeat=d)))
    if spec.kind == "l1":
        return tuple(sorted(tuple(s * x for x in unit(d, i)) for i in range(d) for s in (ONE, -ONE)))
    if spec.kind == "polyhedral":
        return tuple(sorted(spec.ball_vertices))
    raise SmoothNormUnsupported("primal_vertices")


@dataclass(frozen=True)
class DualBall:
    polytope: Polytope

    @property
    def ext_points(self) -> tuple[Vector, ...]:
        return self.polytope.vertices


def _require_polyhedral(spec: NormSpec, operation: str) -> None:
    if not spec.polyhedral_kind:
        raise SmoothNormUnsupported(operation)


@lru_cache(maxsize=None)
def dual_ball(spec: NormSpec) -> DualBall:
    """Polar of the primal ball: ``{y : <y, v> <= 1 for every primal vertex v}``."""
    _require_polyhedral(spec, "dual_ball")
    d = spec.dim
    if spec.kind == "linf":
        verts = _primal_vertices(NormSpec.l1(d))
    elif spec.kind == "l1":
        verts = _primal_vertices(NormSpec.linf(d))
    else:
        verts = tuple(vertex_enumeration([(v, ONE) for v in spec.ball_vertices], dim=d))
    facets = tuple((v, ONE) for v in _primal_vertices(spec))
    return DualBall(Polytope(d, tuple(sorted(verts)), facets, ()))


def dual_vertices(spec: NormSpec) -> tuple[Vector, ...]:
    return dual_ball(spec).ext_points


def norm_value(spec: NormSpec, x: Sequence, side: Side | str = Side.PRIMAL):
    """Exact norm of ``x`` (a Fraction) for polyhedral kinds.

    Primal: Minkowski gauge of the ball, i.e. the support function of the dual
    ball.  Dual: support function of the primal ball.  For l_p kinds a float
    approximation is returned; its type is the flag that it is inexact.
    """
    side = Side(side)
    if spec.kind == "lp":
        exp = spec.p if side is Side.PRIMAL else spec.conjugate
        return float(sum(abs(float(v)) ** float(exp) for v in x) ** (1 / float(exp)))
    x = qvec(x)
    pts = dual_vertices(spec) if side is Side.PRIMAL else _primal_vertices(spec)
    return max(dot(x, v) for v in pts)


def gauge_lp(spec: NormSpec, x: Sequence) -> Fraction:
    """Minkowski gauge by LP: ``min sum l_i`` with ``x = sum l_i v_i``, ``l >= 0``."""
    _require_polyhedral(spec, "gauge_lp")
    x = qvec(x)
    V = _primal_vertices(spec)
    A = [[v[j] for v in V] for j in range(spec.dim)]
    return lp_solve([ONE] * len(V), (A, list(x)), None, nonneg=True, face_dim=False).value


def dual_norm_lp(spec: NormSpec, x: Sequence) -> Fraction:
    """Dual norm by LP: ``sup <x, y>`` over the primal ball given by its facets."""
    _require_polyhedral(spec, "dual_norm_lp")
    x = qvec(x)
    G = list(dual_vertices(spec))
    return lp_solve(list(x), None, (G, [ONE] * len(G)), maximize=True, face_dim=False).value


def is_simplexoid(spec: NormSpec) -> bool:
    """True iff every facet of the dual ball is a simplex.

    Every proper face lies in a facet and faces of simplices are simplices,
    so checking facets suffices.
    """
    _require_polyhedral(spec, "is_simplexoid")
    verts = dual_vertices(spec)
    h = facet_enumeration(verts)
    return all(len(inc) == spec.dim for inc in h.incidence)


@dataclass(frozen=True)
class Decomposition:
    """Convex weights over dual-ball vertices with a prescribed barycenter.

    ``face`` is the vertex set of the minimal face containing the barycenter;
    when that face is not a simplex, ``alternative`` holds a second, distinct
    decomposition.
    """

    point: Vector
    weights: tuple[tuple[Vector, Fraction], ...]
    face: tuple[Vector, ...]
    unique: bool
    alternative: tuple[tuple[Vector, Fraction], ...] | None = None


def minimal_face(spec: NormSpec, x_star: Sequence) -> tuple[Vector, ...]:
    """Vertices of the smallest face of the dual ball containing ``x_star``.

    The primal vertices tight at ``x_star`` are the facets of the dual ball
    through it; the face is cut out by all of them at once.
    """
    x_star = qvec(x_star)
    tight = [v for v in _primal_vertices(spec) if dot(x_star, v) == 1]
    return tuple(w for w in dual_vertices(spec) if all(dot(w, v) == 1 for v in tight))


def _weights(x_star, face, objective=None, maximize=False):
    A = [[w[j] for w in face] for j in range(len(x_star))] + [[ONE] * len(face)]
    obj = objective if objective is not None else [ZERO] * len(face)
    out = lp_solve(obj, (A, list(x_star) + [ONE]), None, nonneg=True, maximize=maximize, face_dim=False)
    return out.point


def barycenter_decomposition(spec: NormSpec, x_star: Sequence) -> Decomposition:
    """Decompose a unit dual vector over the vertices of its minimal face."""
    _require_polyhedral(spec, "barycenter_decomposition")
    x_star = qvec(x_star)
    if norm_value(spec, x_star, Side.DUAL) != 1:
        raise NotOnSphere(f"dual norm of {tuple(map(str, x_star))} is not 1")
    face = minimal_face(spec, x_star)
    lam = _weights(x_star, face)
    first = tuple((w, l) for w, l in zip(face, lam) if l)
    unique = len(face) == affine_dim(face) + 1
    alt = None
    if not unique:
        # x_star is in the relative interior of a non-simplex face: some
        # vertex weight is not pinned down, so its min and max differ
        for i in range(len(face)):
            obj = [ONE if j == i else ZERO for j in range(len(face))]
            lo = _weights(x_star, face, obj)
            hi = _weights(x_star, face, obj, maximize=True)
            if lo != hi:
                first = tuple((w, l) for w, l in zip(face, lo) if l)
                alt = tuple((w, l) for w, l in zip(face, hi) if l)
                break
    return Decomposition(x_star, first, face, unique, alt)


def strictly_convex_dual(spec: NormSpec) -> bool:
    if spec.dim == 1:
        return True
    return spec.kind == "lp"


# ---------------------------------------------------------------------------
# exact bounds for l_p quantities


def _int_root_bounds(r: Fraction, k: int, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= r**(1/k) <= hi`` with ``hi - lo <= tol`` (r >= 0)."""
    if r == 0:
        return ZERO, ZERO
    lo, hi = ZERO, max(ONE, r)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid ** k <= r:
            lo = mid
        else:
            hi = mid
    return lo, hi


def power_bounds(x: Fraction, e: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Rational bounds for ``|x| ** e`` with ``e > 0`` rational."""
    x = abs(x)
    base = x ** e.numerator
    lo, hi = _int_root_bounds(base, e.denominator, tol)
    return lo, hi


@dataclass(frozen=True)
class NormingPoint:
    """The unique norming point of ``x_star`` for an l_p norm, in factored form.

    The point is ``y / N`` where ``y_i = sign(a_i)|a_i|^(q-1)`` and
    ``N = ||a||_q^(q-1)``.  When every entry is rational, ``exact`` holds it.
    """

    x_star: Vector
    p: Fraction
    exact: Vector | None

    def approx(self, tol: Fraction) -> Vector:
        """A rational approximation of the norming point."""
        if self.exact is not None:
            return self.exact
        qq = self.p / (self.p - 1)
        ys = []
        for a in self.x_star:
            lo, hi = power_bounds(a, qq - 1, tol)
            ys.append((lo + hi) / 2 * (1 if a > 0 else -1 if a < 0 else 0))
        s_lo = sum((power_bounds(a, qq, tol)[0] for a in self.x_star), ZERO)
        s_hi = sum((power_bounds(a, qq, tol)[1] for a in self.x_star), ZERO)
        n_lo, _ = power_bounds(s_lo, 1 / self.p, tol)
        _, n_hi = power_bounds(s_hi, 1 / self.p, tol)
        N = (n_lo + n_hi) / 2
        return tuple(y / N for y in ys)


def norming_point(spec: NormSpec, x_star: Sequence) -> NormingPoint:
    """Unique unit vector ``x`` with ``<x_star, x> = ||x_star||_q`` for l_p kinds."""
    if spec.kind != "lp":
        raise ValueError("norming points are only unique for smooth l_p norms")
    x_star = qvec(x_star)
    support = [a for a in x_star if a != 0]
    exact = None
    if len(support) == 1:
        exact = tuple((ONE if a > 0 else -ONE) if a != 0 else ZERO for a in x_star)
    return NormingPoint(x_star, spec.p, exact)


def lp_image_norm_below_one(spec: NormSpec, U: Sequence[Sequence[Fraction]], x_star: Sequence) -> bool:
    """Certify ``||U x||_p <= 1`` where ``x`` is the norming point of ``x_star``.

    Exact shortcuts first (``U`` a contraction of both l_1 and l_oo, which by
    interpolation contracts every l_p); otherwise strict inequality is
    certified with shrinking rational enclosures.  Returns False when no
    certificate is found.
    """
    U = [qvec(r) for r in U]
    col = max((sum((abs(U[i][j]) for i in range(len(U))), ZERO) for j in range(len(U[0]))), default=ZERO)
    row = max((sum((abs(x) for x in r), ZERO) for r in U), default=ZERO)
    if col <= 1 and row <= 1:
        return True
    npnt = norming_point(spec, x_star)
    p = spec.p
    qq = p / (p - 1)
    if npnt.exact is not None:
        img = [dot(r, npnt.exact) for r in U]
        if sum((abs(v) for v in img), ZERO) <= 1 or max(abs(v) for v in img) == 0:
            return True  # ||v||_p <= ||v||_1
        tol = Fraction(1, 2**20)
        for _ in range(6):
            hi = sum((power_bounds(v, p, tol)[1] for v in img), ZERO)
            if hi < 1:
                return True
            lo = sum((power_bounds(v, p, tol)[0] for v in img), ZERO)
            if lo > 1:
                return False
            tol /= 2**20
        return False
    # ||U y||_p^p <= N^p = sum |a|^q, with y_i = sign(a_i)|a_i|^(q-1)
    tol = Fraction(1, 2**24)
    for _ in range(5):
        ylo, yhi = [], []
        for a in npnt.x_star:
            lo, hi = power_bounds(a, qq - 1, tol)
            if a < 0:
                lo, hi = -hi, -lo
            elif a == 0:
                lo, hi = ZERO, ZERO
            ylo.append(lo)
            yhi.append(hi)
        lhs_hi = ZERO
        for r in U:
            s_hi = sum((c * (yhi[j] if c > 0 else ylo[j]) for j, c in enumerate(r)), ZERO)
            s_lo = sum((c * (ylo[j] if c > 0 else yhi[j]) for j, c in enumerate(r)), ZERO)
            m = max(abs(s_hi), abs(s_lo))
            lhs_hi += power_bounds(m, p, tol)[1]
        rhs_lo = sum((power_bounds(a, qq, tol)[0] for a in npnt.x_star), ZERO)
        if lhs_hi < rhs_lo:
            return True
        tol /= 2**24
    return False
