"""Representing measures, simpliciality verdicts, affine-function spaces,
the dilation operator and the L1-predual test.

Measures on a finite K are vectors: a scalar measure is a length-n vector of
point masses and an E*-valued measure is an n x d matrix whose row ``s`` is
the mass at ``s``.  Representing sets are polytopes; they are enumerated in
a lifted space where total variation is linear:

* scalar: ``(mu+, mu-) >= 0`` with ``sum(mu+ + mu-) = c``;
* vector: ``(mu, r)`` with ``r_s >= <mu_s, v>`` for the primal-ball vertices
  ``v`` and ``sum r = c``.

With ``c`` the minimal total variation both lifts are bijective onto the
representing set (any slack would give a representing measure of smaller
mass), so vertex enumeration there is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .boundary import boundary_indices
from .errors import (
    DegenerateInput,
    InvariantViolation,
    NoConstantsInHw,
    NotWeaklySimplicial,
    SmoothNormUnsupported,
)
from .exactgeom import (
    ONE,
    ZERO,
    LPStatus,
    Polytope,
    Subspace,
    Vector,
    dot,
    extreme_points,
    facet_enumeration,
    fmt,
    lp_solve,
    q,
    qvec,
    rank,
    unit,
    vertex_enumeration,
    zeros,
)
from .function_space import Constants, FunctionSpace, ScalarSpace, constants_status, separates_points, weak_space
from .normed_space import (
    NormSpec,
    dual_vertices,
    lp_image_norm_below_one,
    norm_value,
    norming_point,
)

# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class ScalarMeasure:
    values: Vector

    @classmethod
    def of(cls, values) -> "ScalarMeasure":
        return cls(qvec(values))

    @classmethod
    def dirac(cls, n: int, t: int) -> "ScalarMeasure":
        return cls(unit(n, t))

    @property
    def total_variation(self) -> Fraction:
        return sum((abs(x) for x in self.values), ZERO)

    @property
    def mass(self) -> Fraction:
        return sum(self.values, ZERO)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(s for s, x in enumerate(self.values) if x)

    def tensor(self, x_star) -> "VectorMeasure":
        x_star = qvec(x_star)
        return VectorMeasure(tuple(tuple(a * x for x in x_star) for a in self.values))

    def describe(self, points) -> str:
        terms = [f"{fmt(x)}*e[{points[s]}]" for s, x in enumerate(self.values) if x]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class VectorMeasure:
    values: tuple[Vector, ...]

    @classmethod
    def of(cls, rows) -> "VectorMeasure":
        return cls(tuple(qvec(r) for r in rows))

    @classmethod
    def zero(cls, n: int, d: int) -> "VectorMeasure":
        return cls(tuple(zeros(d) for _ in range(n)))

    @property
    def flat(self) -> Vector:
        return tuple(x for r in self.values for x in r)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(s for s, r in enumerate(self.values) if any(r))

    def total_variation(self, spec: NormSpec) -> Fraction:
        return sum((norm_value(spec, r, "Dual") for r in self.values), ZERO)

    def variation(self, spec: NormSpec) -> ScalarMeasure:
        return ScalarMeasure(tuple(norm_value(spec, r, "Dual") for r in self.values))

    def action(self, H: FunctionSpace) -> Vector:
        """The functional ``h -> sum_s <mu_s, h(s)>`` on the basis of H."""
        return tuple(sum((dot(r, H.value(b, s)) for s, r in enumerate(self.values)), ZERO) for b in H.basis)

    def __add__(self, other: "VectorMeasure") -> "VectorMeasure":
        return VectorMeasure(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.values, other.values)))

    def scale(self, c) -> "VectorMeasure":
        c = q(c)
        return VectorMeasure(tuple(tuple(c * x for x in r) for r in self.values))

    def describe(self, points) -> str:
        terms = [f"e[{points[s]}]x({', '.join(map(fmt, r))})" for s, r in enumerate(self.values) if any(r)]
        return " + ".join(terms) or "0"


def _vm_key(mu: VectorMeasure):
    # descending lexicographic order on the flattened values
    return tuple(-x for x in mu.flat)


def scalar_action(S_basis: Sequence[Vector], sigma: Sequence[Fraction]) -> Vector:
    return tuple(dot(b, sigma) for b in S_basis)


# ---------------------------------------------------------------------------
# scalar representing sets


@dataclass(frozen=True)
class ScalarRepresentingSet:
    """``M_t(S)``: vertices of the scalar representing measures at a point."""

    point: int
    norm: Fraction
    vertices: tuple[ScalarMeasure, ...]

    @property
    def polytope(self) -> Polytope:
        return Polytope(len(self.vertices[0].values), tuple(v.values for v in self.vertices))

    def boundary_part(self, ch: Iterable[int]) -> tuple[ScalarMeasure, ...]:
        ch = set(ch)
        return tuple(v for v in self.vertices if set(v.support) <= ch)


def _scalar_lift_system(basis: Sequence[Vector], target: Sequence[Fraction], n: int, support=None):
    A, b = [], []
    for f, v in zip(basis, target):
        A.append(tuple(f) + tuple(-x for x in f))
        b.append(v)
    if support is not None:
        for s in range(n):
            if s not in support:
                A.append(tuple(ONE if j in (s, n + s) else ZERO for j in range(2 * n)))
                b.append(ZERO)
    return A, b


def min_variation_scalar(basis: Sequence[Vector], target: Sequence[Fraction], n: int, support=None):
    """``min ||sigma||`` subject to ``<sigma, f_j> = target_j``; returns (value, sigma) or None."""
    A, b = _scalar_lift_system(basis, target, n, support)
    out = lp_solve([ONE] * (2 * n), (A, b) if A else None, None, nonneg=True, face_dim=False)
    if out.status is not LPStatus.OPTIMAL:
        return None
    return out.value, tuple(out.point[s] - out.point[n + s] for s in range(n))


def scalar_representing_vertices(basis: Sequence[Vector], target: Sequence[Fraction], n: int,
                                 c: Fraction | None = None, support=None) -> tuple[ScalarMeasure, ...]:
    """Vertices of ``{sigma : <sigma, f_j> = target_j, ||sigma|| = c}`` (``c`` minimal by default)."""
    if c is None:
        res = min_variation_scalar(basis, target, n, support)
        if res is None:
            return ()
        c = res[0]
    A, b = _scalar_lift_system(basis, target, n, support)
    eq = list(zip(A, b)) + [((ONE,) * (2 * n), c)]
    facets = [(tuple(-ONE if j == i else ZERO for j in range(2 * n)), ZERO) for i in range(2 * n)]
    verts = vertex_enumeration(facets, eq, 2 * n)
    out = {tuple(v[s] - v[n + s] for s in range(n)) for v in verts}
    return tuple(ScalarMeasure(v) for v in sorted(out, reverse=True))


def representing_measures_space(S: ScalarSpace, t: int) -> ScalarRepresentingSet:
    target = S.evaluation(t)
    res = min_variation_scalar(S.basis, target, S.n)
    c = res[0]
    return ScalarRepresentingSet(t, c, scalar_representing_vertices(S.basis, target, S.n, c))


@lru_cache(maxsize=512)
def _scalar_sets(H: FunctionSpace) -> tuple[ScalarRepresentingSet, ...]:
    Hw = weak_space(H)
    return tuple(representing_measures_space(Hw, t) for t in range(H.n))


def representing_measures_scalar(H: FunctionSpace, t) -> ScalarRepresentingSet:
    """``M_t(H) = M_t(H_w)``: the minimal-variation measures representing evaluation at t."""
    return _scalar_sets(H)[H.index(t)]


def representing_measures_operator(H: FunctionSpace, t) -> ScalarRepresentingSet:
    """``M_t(H)`` computed directly from the operator equations ``sum mu_s h(s) = h(t)``.

    Independent of :func:`representing_measures_scalar`; the two agree.
    """
    ti = H.index(t)
    rows, target = [], []
    for b in H.basis:
        for i in range(H.d):
            rows.append(tuple(b[s * H.d + i] for s in range(H.n)))
            target.append(b[ti * H.d + i])
    res = min_variation_scalar(rows, target, H.n)
    return ScalarRepresentingSet(ti, res[0], scalar_representing_vertices(rows, target, H.n, res[0]))


# ---------------------------------------------------------------------------
# vector representing sets (polyhedral E)


def _vector_lift(H: FunctionSpace, phi: Sequence[Fraction], support=None):
    n, d = H.n, H.d
    N = n * d + n
    A, b = [], []
    for j, basis_fn in enumerate(H.basis):
        A.append(tuple(basis_fn) + zeros(n))
        b.append(phi[j])
    if support is not None:
        for s in range(n):
            if s not in support:
                for i in range(d):
                    A.append(unit(N, s * d + i))
                    b.append(ZERO)
                A.append(unit(N, n * d + s))
                b.append(ZERO)
    G = []
    for s in range(n):
        for v in H.target.primal_vertices():
            row = [ZERO] * N
            for i in range(d):
                row[s * d + i] = v[i]
            row[n * d + s] = -ONE
            G.append(tuple(row))
    return N, A, b, G


def _split(H: FunctionSpace, x: Sequence[Fraction]) -> VectorMeasure:
    d = H.d
    return VectorMeasure(tuple(tuple(x[s * d:(s + 1) * d]) for s in range(H.n)))


@dataclass(frozen=True)
class NormResult:
    value: Fraction
    measure: VectorMeasure


def functional_norm(H: FunctionSpace, phi) -> NormResult:
    """``||phi||`` as the minimal total variation of a representing E*-valued measure."""
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("functional_norm")
    phi = qvec(phi)
    if len(phi) != H.m:
        raise DegenerateInput(f"functional has {len(phi)} values, H has dimension {H.m}")
    N, A, b, G = _vector_lift(H, phi)
    c = [ZERO] * (H.n * H.d) + [ONE] * H.n
    out = lp_solve(c, (A, b), (G, [ZERO] * len(G)), face_dim=False)
    if out.status is not LPStatus.OPTIMAL:
        raise InvariantViolation("representation LP must be solvable")
    return NormResult(out.value, _split(H, out.point))


@dataclass(frozen=True)
class RepresentingSet:
    """Vertices of ``M_phi(H)``.

    ``complete`` is False when only a certified subset is known (smooth
    targets without constants); ``certificates`` then holds, per vertex,
    the operator used to certify it.
    """

    functional: Vector
    norm: Fraction | None
    vertices: tuple[VectorMeasure, ...]
    complete: bool = True
    certificates: tuple = ()

    def boundary_part(self, ch: Iterable[int]) -> tuple[VectorMeasure, ...]:
        ch = set(ch)
        return tuple(v for v in self.vertices if set(v.support) <= ch)

    @property
    def polytope(self) -> Polytope:
        return Polytope(len(self.vertices[0].flat), tuple(v.flat for v in self.vertices))


@lru_cache(maxsize=4096)
def _vector_set(H: FunctionSpace, phi: Vector) -> RepresentingSet:
    c = functional_norm(H, phi).value
    N, A, b, G = _vector_lift(H, phi)
    eq = list(zip(A, b)) + [(zeros(H.n * H.d) + (ONE,) * H.n, c)]
    verts = vertex_enumeration([(g, ZERO) for g in G], eq, N)
    ms = sorted({_split(H, v) for v in verts}, key=_vm_key)
    return RepresentingSet(phi, c, tuple(ms))


def representing_measures_vector(H: FunctionSpace, phi) -> RepresentingSet:
    """All vertices of ``M_phi(H)`` for a polyhedral target."""
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("representing_measures_vector for functionals not of the form x*.phi_H(t)")
    return _vector_set(H, qvec(phi))


def contains_measure(H: FunctionSpace, phi, mu: VectorMeasure) -> bool:
    """Membership in ``M_phi(H)``: same action and minimal total variation."""
    phi = qvec(phi)
    return mu.action(H) == phi and mu.total_variation(H.target) == functional_norm(H, phi).value


# ---------------------------------------------------------------------------
# smooth l_p targets: the strictly-convex-dual route


@dataclass(frozen=True)
class NormingCertificate:
    """Columns (coefficient vectors in H) of an operator ``x -> h_x`` in H.

    ``h_x(t) = c x`` and ``||h_x(s)||_p <= 1`` at the norming point x of x*,
    which certifies ``||x* o phi_H(t)|| >= c ||x*||_q``.
    """

    coefficients: tuple[Vector, ...]  # d coefficient vectors of length m
    scale: Fraction

    def operator_at(self, H: FunctionSpace, s: int) -> tuple[Vector, ...]:
        cols = [H.value(H.combine(c), s) for c in self.coefficients]
        return tuple(tuple(cols[j][i] for j in range(H.d)) for i in range(H.d))


def verify_norming_certificate(H: FunctionSpace, t: int, x_star, cert: NormingCertificate) -> bool:
    U_t = cert.operator_at(H, t)
    if U_t != tuple(tuple(cert.scale if i == j else ZERO for j in range(H.d)) for i in range(H.d)):
        return False
    return all(lp_image_norm_below_one(H.target, cert.operator_at(H, s), x_star) for s in range(H.n) if s != t)


def _sphere_points(x_approx: Vector, d: int) -> list[Vector]:
    pts = {tuple(s * x for x in unit(d, i)) for i in range(d) for s in (ONE, -ONE)}
    for signs in itertools.product((ONE, -ONE), repeat=d):
        pts.add(tuple(s * x for s, x in zip(signs, x_approx)))
    return sorted(pts)


def find_norming_certificate(H: FunctionSpace, t: int, x_star, scale: Fraction) -> NormingCertificate | None:
    """Search for h = U x in H with ``U_t = scale * I`` and ``U_s x`` inside the unit ball.

    The LP asks that every ``U_s x~`` (x~ a rational approximation of the
    norming point) lie in the convex hull of axis points and sign flips of
    x~; the result is then certified exactly at the true norming point.
    """
    if scale > 1:
        return None
    d, m, n = H.d, H.m, H.n
    # the LP only steers the search (the certificate is checked exactly
    # afterwards), so a coarse approximation keeps the arithmetic small
    fine = norming_point(H.target, x_star).approx(Fraction(1, 10**6))
    x_approx = tuple(x.limit_denominator(1000) for x in fine)
    Y = _sphere_points(x_approx, d)
    others = [s for s in range(n) if s != t]
    nC = m * d
    nL = len(others) * len(Y)
    nE = len(others) * d * d  # bounds on |U_s[r][i]|
    N = nC + nL + nE

    def cvar(j, i):  # coefficient of basis j in column i
        return i * m + j

    A, b, G, h = [], [], [], []
    for i in range(d):
        for r in range(d):
            row = [ZERO] * N
            for j, f in enumerate(H.basis):
                row[cvar(j, i)] = f[t * d + r]
            A.append(row)
            b.append(scale if i == r else ZERO)
    for k, s in enumerate(others):
        base = nC + k * len(Y)
        for r in range(d):
            row = [ZERO] * N
            for i in range(d):
                for j, f in enumerate(H.basis):
                    row[cvar(j, i)] += f[s * d + r] * x_approx[i]
            for y_i, y in enumerate(Y):
                row[base + y_i] = -y[r]
            A.append(row)
            b.append(ZERO)
        row = [ZERO] * N
        for y_i in range(len(Y)):
            row[base + y_i] = ONE
        G.append(row)
        h.append(ONE)
        for r in range(d):
            for i in range(d):
                e = nC + nL + (k * d + r) * d + i
                for sign in (ONE, -ONE):
                    row = [ZERO] * N
                    for j, f in enumerate(H.basis):
                        row[cvar(j, i)] = sign * f[s * d + r]
                    row[e] = -ONE
                    G.append(row)
                    h.append(ZERO)
    # small, sparse operators certify most easily (U_s = I is a contraction)
    obj = [ZERO] * (nC + nL) + [ONE] * nE
    signs = [False] * nC + [True] * (nL + nE)
    out = lp_solve(obj, (A, b), (G, h), nonneg=signs, face_dim=False)
    if out.status is not LPStatus.OPTIMAL:
        return None
    coeffs = tuple(tuple(out.point[cvar(j, i)] for j in range(m)) for i in range(d))
    cert = NormingCertificate(coeffs, scale)
    return cert if verify_norming_certificate(H, t, x_star, cert) else None


def slice_space(H: FunctionSpace, x_star) -> ScalarSpace:
    """``x* o H`` as a scalar space."""
    x_star = qvec(x_star)
    rows = [tuple(dot(x_star, H.value(b, s)) for s in range(H.n)) for b in H.basis]
    return ScalarSpace(H.points, Subspace.span(rows, H.n))


@lru_cache(maxsize=2048)
def _lp_route(H: FunctionSpace, t: int, x_star: Vector) -> RepresentingSet:
    phi = H.functional_at(t, x_star)
    if not any(x_star):
        return RepresentingSet(phi, ZERO, (VectorMeasure.zero(H.n, H.d),))
    S = slice_space(H, x_star)
    if S.dim == 0:
        return RepresentingSet(phi, ZERO, (VectorMeasure.zero(H.n, H.d),))
    sigmas = representing_measures_space(S, t)
    if constants_status(H) is Constants.FULL:
        # with constants and a strictly convex dual every representing
        # measure is sigma (x) x* with sigma in M_t(x* o H)
        ms = sorted({s.tensor(x_star) for s in sigmas.vertices}, key=_vm_key)
        return RepresentingSet(phi, None, tuple(ms))
    kept, certs = [], []
    cert = find_norming_certificate(H, t, x_star, sigmas.norm)
    if cert is not None:
        for s in sigmas.vertices:
            kept.append(s.tensor(x_star))
            certs.append(cert)
    order = sorted(range(len(kept)), key=lambda i: _vm_key(kept[i]))
    return RepresentingSet(phi, None, tuple(kept[i] for i in order), False, tuple(certs[i] for i in order))


def representing_measures_at(H: FunctionSpace, t, x_star) -> RepresentingSet:
    """Vertices of ``M_{x* o phi_H(t)}(H)``.

    Polyhedral targets are enumerated exactly.  Smooth l_p targets use
    ``sigma (x) x*`` with ``sigma`` a vertex of ``M_t(x* o H)``: exact when H
    contains constants, and otherwise each candidate is kept only if a
    norming function in H certifies its mass is minimal (a certified subset;
    ``complete`` is then False).  ``norm`` is None for smooth targets since
    the value ``||sigma|| ||x*||_q`` is irrational in general.
    """
    ti = H.index(t)
    xs = qvec(x_star)
    if len(xs) != H.d:
        raise DegenerateInput("x* has the wrong dimension")
    if H.target.polyhedral_kind:
        return _vector_set(H, H.functional_at(ti, xs))
    return _lp_route(H, ti, xs)


# ---------------------------------------------------------------------------
# probes


@dataclass(frozen=True)
class Probe:
    point: int
    x_star: Vector

    def describe(self, H: FunctionSpace) -> str:
        return f"({H.points[self.point]}, ({', '.join(map(fmt, self.x_star))}))"


def _normalize(spec: NormSpec, y: Vector) -> Vector | None:
    nv = norm_value(spec, y, "Dual")
    if nv == 0:
        return None
    return tuple(x / nv for x in y)


def default_dual_probes(spec: NormSpec) -> list[Vector]:
    """Dual-ball vertices, then normalized facet barycenters, then normalized
    pairwise midpoints; each group in descending order, duplicates dropped."""
    if not spec.polyhedral_kind:
        d = spec.dim
        eighth = Fraction(1, 8)
        if d == 2:
            return [(ZERO, ONE), (ONE, ZERO), (eighth, ONE), (-eighth, ONE)]
        out = [unit(d, i) for i in range(d)]
        for i in range(d):
            for j in range(d):
                if i != j:
                    out.append(tuple(ONE if k == i else (eighth if k == j else ZERO) for k in range(d)))
        return out
    verts = list(dual_vertices(spec))
    groups = [sorted(verts, reverse=True)]
    bary = set()
    if spec.dim > 1:
        hrep = facet_enumeration(verts)
        for inc in hrep.incidence:
            face = [hrep.vertices[i] for i in inc]
            bary.add(_normalize(spec, tuple(sum(col) / len(face) for col in zip(*face))))
    groups.append(sorted(bary, reverse=True))
    mids = set()
    for v, w in itertools.combinations(verts, 2):
        mid = _normalize(spec, tuple((a + b) / 2 for a, b in zip(v, w)))
        if mid is not None:
            mids.add(mid)
    groups.append(sorted(mids, reverse=True))
    seen, out = set(), []
    for g in groups:
        for y in g:
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def default_probes(H: FunctionSpace, extras: Iterable = ()) -> list[Probe]:
    """User extras first, then every point crossed with :func:`default_dual_probes`."""
    out, seen = [], set()
    for t, x in extras:
        p = Probe(H.index(t), qvec(x))
        if p not in seen:
            seen.add(p)
            out.append(p)
    xs = default_dual_probes(H.target)
    for t in range(H.n):
        for x in xs:
            p = Probe(t, x)
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


# ---------------------------------------------------------------------------
# simpliciality


class Kind(str, Enum):
    WEAK = "Weak"
    FUNCTIONAL_WEAK = "FunctionalWeak"
    VECTOR = "Vector"
    FUNCTIONAL_VECTOR = "FunctionalVector"


class Status(str, Enum):
    HOLDS = "Holds"
    HOLDS_ON_PROBES = "HoldsOnProbes"
    FAILS = "Fails"


@dataclass(frozen=True)
class Witness:
    """Two distinct boundary measures representing the same target.

    ``target`` is the functional (values on the basis of H) for vector
    witnesses, or the evaluation point / state for scalar ones.
    """

    first: ScalarMeasure | VectorMeasure
    second: ScalarMeasure | VectorMeasure
    target: Vector
    label: str
    certificates: tuple = ()


@dataclass(frozen=True)
class SimplicialityVerdict:
    kind: Kind
    status: Status
    witness: Witness | None = None
    probe_log: tuple[str, ...] = ()
    reason: str = ""
    undecided: tuple[str, ...] = ()


def verify_scalar_witness(H: FunctionSpace, w: Witness, space: ScalarSpace | None = None) -> bool:
    """Both measures boundary, distinct, same action on H_w and same minimal mass."""
    S = space or weak_space(H)
    ch = set(boundary_indices(H))
    a, b = w.first, w.second
    if a == b or not set(a.support) <= ch or not set(b.support) <= ch:
        return False
    act_a, act_b = scalar_action(S.basis, a.values), scalar_action(S.basis, b.values)
    if act_a != act_b or tuple(act_a) != tuple(w.target):
        return False
    res = min_variation_scalar(S.basis, act_a, S.n)
    return a.total_variation == b.total_variation == res[0]


def verify_vector_witness(H: FunctionSpace, w: Witness) -> bool:
    """Both measures boundary, distinct, same action on H and both of minimal mass."""
    a, b = w.first, w.second
    ch = set(boundary_indices(H))
    if a == b or not set(a.support) <= ch or not set(b.support) <= ch:
        return False
    if a.action(H) != tuple(w.target) or b.action(H) != tuple(w.target):
        return False
    if H.target.polyhedral_kind:
        c = functional_norm(H, w.target).value
        return a.total_variation(H.target) == b.total_variation(H.target) == c
    # smooth target: both are sigma (x) x*; compare the scalar masses and
    # re-check the certificates (or the constants theorem)
    return _smooth_minimal(H, w, a) and _smooth_minimal(H, w, b)


def _smooth_minimal(H: FunctionSpace, w: Witness, mu: VectorMeasure) -> bool:
    t_str, x_str = w.label.split("|")
    t = H.index(t_str)
    x_star = tuple(Fraction(x) for x in x_str.split(","))
    sigma = _as_tensor(mu, x_star)
    if sigma is None:
        return False
    S = slice_space(H, x_star)
    res = min_variation_scalar(S.basis, S.evaluation(t), S.n)
    if sigma.total_variation != res[0] or scalar_action(S.basis, sigma.values) != S.evaluation(t):
        return False
    if constants_status(H) is Constants.FULL:
        return True
    return any(verify_norming_certificate(H, t, x_star, c) and c.scale == res[0] for c in w.certificates)


def _as_tensor(mu: VectorMeasure, x_star: Vector) -> ScalarMeasure | None:
    k = next(i for i, x in enumerate(x_star) if x)
    sigma = tuple(r[k] / x_star[k] for r in mu.values)
    if ScalarMeasure(sigma).tensor(x_star) != mu:
        return None
    return ScalarMeasure(sigma)


def weak_simplicial(H: FunctionSpace) -> SimplicialityVerdict:
    """Unique boundary measure in every ``M_t(H)``, decided exactly."""
    ch = boundary_indices(H)
    log = []
    Hw = weak_space(H)
    for t in range(H.n):
        bnd = representing_measures_scalar(H, t).boundary_part(ch)
        log.append(f"t={H.points[t]}: {len(bnd)} boundary vertices")
        if not bnd:
            raise InvariantViolation(f"no boundary representing measure at {H.points[t]}")
        if len(bnd) > 1:
            w = Witness(bnd[0], bnd[1], Hw.evaluation(t), H.points[t])
            if not verify_scalar_witness(H, w):
                raise InvariantViolation("weak simpliciality witness failed re-verification")
            return SimplicialityVerdict(Kind.WEAK, Status.FAILS, w, tuple(log))
    return SimplicialityVerdict(Kind.WEAK, Status.HOLDS, None, tuple(log))


def affine_dependence(points: Sequence[Vector]) -> Vector | None:
    """Nonzero ``a`` with ``sum a_i p_i = 0`` and ``sum a_i = 0``, or None."""
    from .exactgeom import nullspace

    k = len(points)
    rows = [tuple(p[j] for p in points) for j in range(len(points[0]))] + [(ONE,) * k]
    ns = nullspace(rows, k)
    return ns[0] if ns else None


def functional_weak_simplicial(H: FunctionSpace) -> SimplicialityVerdict:
    """H_w functionally simplicial, i.e. its state space is a simplex."""
    from .function_space import state_space

    Hw = weak_space(H)
    if not Hw.contains_constants:
        raise NoConstantsInHw("functional weak simpliciality is only decided when H_w contains constants")
    St = state_space(Hw)
    verts = list(St.vertices)
    if len(verts) == St.affine_dim + 1:
        return SimplicialityVerdict(Kind.FUNCTIONAL_WEAK, Status.HOLDS, None,
                                    (f"state space: {len(verts)} vertices, dimension {St.affine_dim}",))
    a = affine_dependence(verts)
    # vertices of the state space are the boundary evaluations; pick a point for each
    ch = boundary_indices(H)
    owner = {}
    for t in ch:
        owner.setdefault(Hw.evaluation(t), t)
    pos = sum((x for x in a if x > 0), ZERO)
    m1, m2 = [ZERO] * H.n, [ZERO] * H.n
    for x, v in zip(a, verts):
        if x > 0:
            m1[owner[v]] += x / pos
        elif x < 0:
            m2[owner[v]] += -x / pos
    target = scalar_action(Hw.basis, m1)
    w = Witness(ScalarMeasure(tuple(m1)), ScalarMeasure(tuple(m2)), target, "state")
    if not verify_scalar_witness(H, w):
        raise InvariantViolation("functional weak simpliciality witness failed re-verification")
    return SimplicialityVerdict(Kind.FUNCTIONAL_WEAK, Status.FAILS, w,
                                (f"state space: {len(verts)} vertices, dimension {St.affine_dim}",))


def _probe_label(H: FunctionSpace, p: Probe) -> str:
    return f"{H.points[p.point]}|{','.join(map(fmt, p.x_star))}"


def _probe_witness(H: FunctionSpace, p: Probe) -> tuple[Witness | None, str]:
    rs = representing_measures_at(H, p.point, p.x_star)
    ch = boundary_indices(H)
    bnd_idx = [i for i, v in enumerate(rs.vertices) if set(v.support) <= set(ch)]
    note = f"{p.describe(H)}: {len(bnd_idx)} boundary vertices" + ("" if rs.complete else " (certified subset)")
    if len(bnd_idx) > 1:
        i, j = bnd_idx[0], bnd_idx[1]
        certs = (rs.certificates[i], rs.certificates[j]) if rs.certificates else ()
        w = Witness(rs.vertices[i], rs.vertices[j], rs.functional, _probe_label(H, p), certs)
        if not verify_vector_witness(H, w):
            raise InvariantViolation("vector simpliciality witness failed re-verification")
        return w, note
    return None, note


def vector_simplicial(H: FunctionSpace, probes: Iterable | None = None,
                      extras: Iterable = ()) -> SimplicialityVerdict:
    """Unique boundary measure in ``M_{x* o phi_H(t)}(H)`` on every probe.

    A witness pair is a proof of failure.  Without one the status is
    ``HoldsOnProbes``.  When H contains constants a failure of weak
    simpliciality also refutes vector simpliciality, and its scalar witness
    is lifted by tensoring with a dual vertex.
    """
    plist = list(probes) if probes is not None else default_probes(H, extras)
    log = []
    partial = []
    for p in plist:
        w, note = _probe_witness(H, p)
        log.append(note)
        if w is not None:
            return SimplicialityVerdict(Kind.VECTOR, Status.FAILS, w, tuple(log))
        if note.endswith("(certified subset)"):
            partial.append(_probe_label(H, p))
    if constants_status(H) is Constants.FULL:
        weak = weak_simplicial(H)
        if weak.status is Status.FAILS:
            x_star = default_dual_probes(H.target)[0]
            t = H.index(weak.witness.label)
            a = weak.witness.first.tensor(x_star)
            b = weak.witness.second.tensor(x_star)
            w = Witness(a, b, H.functional_at(t, x_star), f"{H.points[t]}|{','.join(map(fmt, x_star))}")
            if H.target.polyhedral_kind and not verify_vector_witness(H, w):
                raise InvariantViolation("lifted witness failed re-verification")
            log.append("weak simpliciality fails and H contains constants")
            return SimplicialityVerdict(Kind.VECTOR, Status.FAILS, w, tuple(log))
    reason = ""
    if partial:
        # a certified subset cannot rule out further boundary measures
        reason = f"{len(partial)} of {len(plist)} probes only have a certified subset of measures"
    return SimplicialityVerdict(Kind.VECTOR, Status.HOLDS_ON_PROBES, None, tuple(log), reason, tuple(partial))


def functional_vector_simplicial(H: FunctionSpace, functionals: Iterable = (),
                                 probes: Iterable | None = None) -> SimplicialityVerdict:
    """Uniqueness of boundary representing measures for the probe functionals
    ``x* o phi_H(t)`` and the user functionals (values on the basis)."""
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("functional_vector_simplicial")
    log = []
    ch = set(boundary_indices(H))
    targets = [(f"user {k}", qvec(phi)) for k, phi in enumerate(functionals)]
    plist = list(probes) if probes is not None else default_probes(H)
    targets += [(_probe_label(H, p), H.functional_at(p.point, p.x_star)) for p in plist]
    for label, phi in targets:
        rs = representing_measures_vector(H, phi)
        bnd = rs.boundary_part(ch)
        log.append(f"{label}: {len(bnd)} boundary vertices")
        if len(bnd) > 1:
            w = Witness(bnd[0], bnd[1], phi, label)
            if not verify_vector_witness(H, w):
                raise InvariantViolation("functional witness failed re-verification")
            return SimplicialityVerdict(Kind.FUNCTIONAL_VECTOR, Status.FAILS, w, tuple(log))
    return SimplicialityVerdict(Kind.FUNCTIONAL_VECTOR, Status.HOLDS_ON_PROBES, None, tuple(log))


# ---------------------------------------------------------------------------
# spaces of affine functions


@dataclass(frozen=True)
class AcSpaces:
    ac_scalar: ScalarSpace
    ac_w: Subspace
    ac_v_upper: Subspace
    ac_v_upper_w: ScalarSpace
    ac_v_certified_negative: bool
    probes: tuple[str, ...]


def _scalar_rows(H: FunctionSpace) -> list[Vector]:
    rows = set()
    for t in range(H.n):
        for mu in representing_measures_scalar(H, t).vertices:
            r = tuple(mu.values[s] - (ONE if s == t else ZERO) for s in range(H.n))
            if any(r):
                rows.add(r)
    return sorted(rows)


def ac_scalar_space(H: FunctionSpace) -> ScalarSpace:
    """``A_c(H_w)``: scalar functions respected by every vertex of every ``M_t(H_w)``."""
    return ScalarSpace(H.points, Subspace.kernel(_scalar_rows(H), H.n))


def ac_w_space(H: FunctionSpace) -> Subspace:
    """``A_c^w(H)``: the same constraints applied to every coordinate."""
    d = H.d
    rows = []
    for r in _scalar_rows(H):
        for i in range(d):
            row = [ZERO] * (H.n * d)
            for s, x in enumerate(r):
                row[s * d + i] = x
            rows.append(tuple(row))
    return Subspace.kernel(rows, H.n * d)


def ac_v_upper_space(H: FunctionSpace, probes: Iterable[Probe]) -> Subspace:
    """Functions f with ``x*(f(t)) = int f dmu`` for every probe and every known
    vertex ``mu`` of its representing set: a superset of ``A_c^v(H)``."""
    rows = set()
    d = H.d
    for p in probes:
        rs = representing_measures_at(H, p.point, p.x_star)
        for mu in rs.vertices:
            row = [x for r in mu.values for x in r]
            for i in range(d):
                row[p.point * d + i] -= p.x_star[i]
            r = tuple(row)
            if any(r):
                rows.add(r)
    return Subspace.kernel(sorted(rows), H.n * d)


def weak_part(points, sub: Subspace, d: int) -> ScalarSpace:
    n = len(points)
    slices = [tuple(b[s * d + i] for s in range(n)) for b in sub.basis for i in range(d)]
    return ScalarSpace(tuple(points), Subspace.span(slices, n))


def ac_spaces(H: FunctionSpace, probes: Iterable | None = None, extras: Iterable = ()) -> AcSpaces:
    plist = list(probes) if probes is not None else default_probes(H, extras)
    acw = ac_w_space(H)
    up = ac_v_upper_space(H, plist)
    negative = constants_status(H) is Constants.FULL and up < acw
    return AcSpaces(
        ac_scalar_space(H), acw, up, weak_part(H.points, up, H.d), negative,
        tuple(p.describe(H) for p in plist),
    )


def boundary_annihilator(H: FunctionSpace) -> Subspace:
    """E*-valued measures carried by the boundary that vanish on ``A_c^w(H)``."""
    ch = set(boundary_indices(H))
    d = H.d
    rows = [tuple(b) for b in ac_w_space(H).basis]
    for s in range(H.n):
        if s not in ch:
            rows += [unit(H.n * d, s * d + i) for i in range(d)]
    return Subspace.kernel(rows, H.n * d)


# ---------------------------------------------------------------------------
# dilation operator


@dataclass(frozen=True)
class DilationChecks:
    idempotent: bool
    rows_boundary_probabilities: bool
    fixed_space_is_acw: bool
    restriction_dimension: bool
    restriction_injective: bool
    restriction_isometric: bool

    @property
    def all(self) -> bool:
        return all(vars(self).values())


@dataclass(frozen=True)
class DilationSuite:
    D: tuple[Vector, ...]
    checks: DilationChecks


def dilation_matrix(H: FunctionSpace) -> tuple[Vector, ...]:
    Hw = weak_space(H)
    if not Hw.contains_constants:
        raise NoConstantsInHw("the dilation operator needs constants in H_w")
    if weak_simplicial(H).status is not Status.HOLDS:
        raise NotWeaklySimplicial("the dilation operator needs weak simpliciality")
    ch = boundary_indices(H)
    return tuple(representing_measures_scalar(H, t).boundary_part(ch)[0].values for t in range(H.n))


def _matmul(A, B):
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(len(B))), ZERO) for j in range(len(B[0])))
                 for i in range(len(A)))


def restriction_isometric(H: FunctionSpace, acw: Subspace) -> bool:
    """``sup_K ||f(t)|| = sup_Ch ||f(t)||`` on ``A_c^w(H)`` (polyhedral E).

    For every point off the boundary and every dual vertex w, maximize
    ``<w, f(t)>`` over f in ``A_c^w(H)`` with ``||f(s)|| <= 1`` on Ch; the
    optimum must not exceed 1.
    """
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("restriction_isometric")
    ch = boundary_indices(H)
    d = H.d
    B = acw.basis
    G = []
    for s in ch:
        for w in dual_vertices(H.target):
            G.append(tuple(sum((w[i] * b[s * d + i] for i in range(d)), ZERO) for b in B))
    for t in range(H.n):
        if t in ch:
            continue
        for w in dual_vertices(H.target):
            obj = tuple(sum((w[i] * b[t * d + i] for i in range(d)), ZERO) for b in B)
            out = lp_solve(obj, None, (G, [ONE] * len(G)), maximize=True, face_dim=False)
            if out.status is not LPStatus.OPTIMAL or out.value > 1:
                return False
    return True


def dilation_suite(H: FunctionSpace) -> DilationSuite:
    D = dilation_matrix(H)
    ch = set(boundary_indices(H))
    n, d = H.n, H.d
    idem = _matmul(D, D) == D
    probs = all(all(x >= 0 for x in row) and sum(row) == 1 and all(x == 0 or s in ch for s, x in enumerate(row))
                for row in D)
    rows = []
    for t in range(n):
        for i in range(d):
            row = [ZERO] * (n * d)
            for s in range(n):
                row[s * d + i] += D[t][s]
            row[t * d + i] -= ONE
            rows.append(tuple(row))
    fixed = Subspace.kernel(rows, n * d)
    acw = ac_w_space(H)
    restricted = [tuple(b[s * d + i] for s in sorted(ch) for i in range(d)) for b in acw.basis]
    if H.target.polyhedral_kind:
        isometric = restriction_isometric(H, acw)
    else:
        # f = (D (x) id) f with boundary-supported probability rows gives
        # ||f(t)|| <= sum_s D[t][s] ||f(s)|| <= sup_Ch ||f|| for any norm
        isometric = probs and fixed == acw
    checks = DilationChecks(
        idempotent=idem,
        rows_boundary_probabilities=probs,
        fixed_space_is_acw=fixed == acw,
        restriction_dimension=acw.dim == len(ch) * d,
        restriction_injective=rank(restricted) == acw.dim,
        restriction_isometric=isometric,
    )
    return DilationSuite(D, checks)


# ---------------------------------------------------------------------------
# L1-predual detection


def is_cross_polytope(vertices: Sequence[Vector], k: int) -> bool:
    """2k vertices in k antipodal, linearly independent pairs."""
    vs = set(vertices)
    if len(vs) != 2 * k or any(tuple(-x for x in v) not in vs for v in vs):
        return False
    reps = sorted({max(v, tuple(-x for x in v)) for v in vs})
    return len(reps) == k and rank(reps) == k


@dataclass(frozen=True)
class L1PredualReport:
    acw_is_l1_predual: bool
    E_is_l1_predual: bool
    weakly_simplicial: bool
    acw_dual_vertices: int
    acw_dimension: int


def sup_dual_ball_vertices(points_n: int, spec: NormSpec, sub: Subspace) -> list[Vector]:
    """Vertices of the dual ball of a subspace of C(K, E) with the sup norm,
    in coordinates of the subspace basis."""
    d = spec.dim
    gens = set()
    for t in range(points_n):
        for w in dual_vertices(spec):
            gens.add(tuple(sum((w[i] * b[t * d + i] for i in range(d)), ZERO) for b in sub.basis))
    return extreme_points(sorted(gens))


def l1_predual_check(H: FunctionSpace) -> L1PredualReport:
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("l1_predual_check")
    if not weak_space(H).contains_constants:
        raise NoConstantsInHw("the L1-predual test needs constants in H_w")
    acw = ac_w_space(H)
    verts = sup_dual_ball_vertices(H.n, H.target, acw)
    acw_ok = is_cross_polytope(verts, acw.dim)
    e_ok = is_cross_polytope(list(dual_vertices(H.target)), H.d)
    weak = weak_simplicial(H).status is Status.HOLDS
    # the equivalence is a theorem for point-separating spaces only: two points
    # with the same evaluation always break weak simpliciality
    Hw = weak_space(H)
    if separates_points(Hw.basis, H.n) and acw_ok != (weak and e_ok):
        raise InvariantViolation("L1-predual equivalence violated")
    return L1PredualReport(acw_ok, e_ok, weak, len(verts), acw.dim)
