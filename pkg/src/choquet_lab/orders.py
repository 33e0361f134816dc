"""Order structures on measures: the cone of convex functions, the Choquet
order, envelopes and maximality, the lift of vector measures to positive
measures on ``K x B_{E*}`` and comparisons inside the fibre ``N(mu)``.

Conventions:

* the cone ``S`` of ``H_w``-convex functions is held by its normals: ``f`` lies
  in ``S`` iff ``a . f <= 0`` for every normal ``a = e_t - sigma`` with
  ``sigma`` a vertex of the probability measures representing ``t``;
* ``sigma1 < sigma2`` in the Choquet order iff ``sigma2 - sigma1`` lies in the
  dual cone, which by Farkas is the conic hull of the vectors ``sigma - e_t``;
* a product measure is a finite list of atoms ``(t, x*, mass)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable

from .boundary import boundary_indices, boundary_indices_w, is_boundary_measure
from .errors import (
    BarycenterMismatch,
    DegenerateInput,
    InvariantViolation,
    MassMismatch,
    NegativeMeasure,
    NotInNMu,
    NotMaximal,
    NoConstantsInHw,
    SmoothNormUnsupported,
)
from .exactgeom import (
    ONE,
    ZERO,
    LPStatus,
    Subspace,
    Vector,
    _dd_rays,
    dot,
    fmt,
    lp_solve,
    qvec,
    unit,
    vertex_enumeration,
    vscale,
    vsub,
    zeros,
)
from .function_space import FunctionSpace, ScalarSpace, weak_space
from .normed_space import NormSpec, Side, barycenter_decomposition, dual_vertices, is_simplexoid, norm_value
from .representation import ScalarMeasure, VectorMeasure, functional_norm


def _as_scalar_space(Hw) -> ScalarSpace:
    return weak_space(Hw) if isinstance(Hw, FunctionSpace) else Hw


def _values(sigma) -> Vector:
    return sigma.values if isinstance(sigma, ScalarMeasure) else qvec(sigma)


# ---------------------------------------------------------------------------
# the cone of H_w-convex functions


@lru_cache(maxsize=512)
def probability_representing_vertices(Hw: ScalarSpace, t: int) -> tuple[Vector, ...]:
    """Vertices of the probability measures ``sigma`` with ``sigma(h) = h(t)`` on ``H_w``."""
    n = Hw.n
    eq = [(f, f[t]) for f in Hw.basis] + [((ONE,) * n, ONE)]
    facets = [(vscale(-ONE, unit(n, s)), ZERO) for s in range(n)]
    return tuple(vertex_enumeration(facets, eq, n))


@dataclass(frozen=True)
class ConvexCone:
    """``{f in Q^n : a . f <= 0 for every normal a}``."""

    n: int
    normals: tuple[Vector, ...]

    def contains(self, f) -> bool:
        f = qvec(f)
        return all(dot(a, f) <= 0 for a in self.normals)

    @cached_property
    def lineality(self) -> Subspace:
        return Subspace.kernel(self.normals, self.n) if self.normals else Subspace.full(self.n)

    @cached_property
    def extreme_rays(self) -> tuple[Vector, ...]:
        """Extreme rays of the pointed part ``cone intersect lineality-complement``."""
        if not self.normals:
            return ()
        L = self.lineality.basis
        rows = list(self.normals) + list(L) + [vscale(-ONE, b) for b in L]
        return tuple(sorted(set(_dd_rays(rows, self.n))))

    @property
    def generators(self) -> tuple[Vector, ...]:
        """Conic generators: ``+-`` a lineality basis followed by the extreme rays."""
        L = self.lineality.basis
        return tuple(L) + tuple(vscale(-ONE, b) for b in L) + self.extreme_rays

    def dual_generators(self) -> tuple[Vector, ...]:
        """Generators of the dual cone ``{y : y . f >= 0 on the cone}``."""
        return tuple(vscale(-ONE, a) for a in self.normals)


def convex_cone(Hw) -> ConvexCone:
    """The cone ``S(H_w)``: one inequality ``f(t) <= sigma(f)`` per point and vertex."""
    Hw = _as_scalar_space(Hw)
    normals = set()
    for t in range(Hw.n):
        for sigma in probability_representing_vertices(Hw, t):
            a = vsub(unit(Hw.n, t), sigma)
            if any(a):
                normals.add(a)
    return ConvexCone(Hw.n, tuple(sorted(normals)))


def _check_positive(*sigmas) -> None:
    for s in sigmas:
        if any(x < 0 for x in s):
            raise NegativeMeasure(f"measure {[fmt(x) for x in s]} has a negative mass")


def choquet_leq(Hw, sigma1, sigma2) -> bool:
    """``sigma1 < sigma2`` in the Choquet order of ``H_w``.

    Decided as the feasibility of ``sigma2 - sigma1 = sum l_k (sigma_k - e_t_k)``
    with ``l >= 0`` (Farkas' lemma for the cone's dual).
    """
    Hw = _as_scalar_space(Hw)
    s1, s2 = _values(sigma1), _values(sigma2)
    _check_positive(s1, s2)
    if len(s1) != Hw.n or len(s2) != Hw.n:
        raise DegenerateInput("measures must have one mass per point")
    diff = vsub(s2, s1)
    gens = convex_cone(Hw).dual_generators()
    if not gens:
        return not any(diff)
    A = [[g[s] for g in gens] for s in range(Hw.n)]
    out = lp_solve([ZERO] * len(gens), (A, list(diff)), None, nonneg=True, face_dim=False)
    return out.status is LPStatus.OPTIMAL


def lower_envelope(Hw, f) -> Vector:
    """Pointwise largest ``g(t)`` over ``g`` in the cone with ``g <= f``."""
    Hw = _as_scalar_space(Hw)
    f = qvec(f)
    n = Hw.n
    cone = convex_cone(Hw)
    G = list(cone.normals) + [unit(n, s) for s in range(n)]
    h = [ZERO] * len(cone.normals) + list(f)
    out = []
    for t in range(n):
        res = lp_solve(unit(n, t), None, (G, h), maximize=True, face_dim=False)
        out.append(res.value)
    return tuple(out)


@dataclass(frozen=True)
class MaximalityReport:
    carried_by_boundary: bool
    envelope_test: bool
    failing_function: Vector | None

    @property
    def agree(self) -> bool:
        return self.carried_by_boundary == self.envelope_test


def envelope_test_family(Hw) -> tuple[Vector, ...]:
    """``+-`` coordinate indicators and ``+-`` conic generators of the cone."""
    Hw = _as_scalar_space(Hw)
    fam = []
    for s in range(Hw.n):
        fam += [unit(Hw.n, s), vscale(-ONE, unit(Hw.n, s))]
    for g in convex_cone(Hw).generators:
        fam += [g, vscale(-ONE, g)]
    return tuple(dict.fromkeys(fam))


def maximality_check(Hw, sigma) -> MaximalityReport:
    """Two maximality criteria for a positive measure, reported side by side.

    ``carried_by_boundary``: the support lies in the Choquet boundary.
    ``envelope_test``: ``sigma(f - lower_envelope(f)) = 0`` on the test family.
    """
    Hw = _as_scalar_space(Hw)
    if not Hw.contains_constants:
        raise NoConstantsInHw("maximality needs constants in the weak space")
    s = _values(sigma)
    _check_positive(s)
    ch = set(boundary_indices_w(Hw))
    carried = all(s[t] == 0 or t in ch for t in range(Hw.n))
    failing = None
    for f, gap in _envelope_gaps(Hw):
        if dot(s, gap) != 0:
            failing = f
            break
    return MaximalityReport(carried, failing is None, failing)


@lru_cache(maxsize=256)
def _envelope_gaps(Hw: ScalarSpace) -> tuple[tuple[Vector, Vector], ...]:
    """``(f, f - lower_envelope(f))`` over the envelope test family."""
    return tuple((f, vsub(f, lower_envelope(Hw, f))) for f in envelope_test_family(Hw))


# ---------------------------------------------------------------------------
# product measures on K x B_{E*}


@dataclass(frozen=True)
class ProductMeasure:
    """Finitely many atoms ``(t, x*, mass)`` on ``K x B_{E*}`` (``n`` points, dual dimension ``d``)."""

    n: int
    d: int
    atoms: tuple[tuple[int, Vector, Fraction], ...]

    def __post_init__(self):
        for t, x, m in self.atoms:
            if not 0 <= t < self.n or len(x) != self.d:
                raise DegenerateInput(f"atom ({t}, {x}) does not fit n={self.n}, d={self.d}")
            if m <= 0:
                raise NegativeMeasure("product-measure atoms carry positive mass")

    @classmethod
    def of(cls, n: int, d: int, atoms: Iterable) -> "ProductMeasure":
        merged: dict[tuple[int, Vector], Fraction] = {}
        for t, x, m in atoms:
            key = (int(t), qvec(x))
            merged[key] = merged.get(key, ZERO) + Fraction(m)
        return cls(n, d, tuple(sorted((t, x, m) for (t, x), m in merged.items() if m)))

    @property
    def mass(self) -> Fraction:
        return sum((m for _, _, m in self.atoms), ZERO)

    def in_dual_ball(self, spec: NormSpec) -> bool:
        return all(norm_value(spec, x, Side.DUAL) <= 1 for _, x, _ in self.atoms)

    def kernel(self, t: int) -> tuple[tuple[Vector, Fraction], ...]:
        """Atoms at ``t`` as ``(x*, mass)``, normalized to a probability (empty if none)."""
        group = [(x, m) for s, x, m in self.atoms if s == t]
        total = sum((m for _, m in group), ZERO)
        return tuple((x, m / total) for x, m in group)

    def describe(self, points) -> str:
        if not self.atoms:
            return "0"
        return " + ".join(
            f"{fmt(m)}*({points[t]}, ({', '.join(fmt(x) for x in xs)}))" for t, xs, m in self.atoms
        )


def t_star(nu: ProductMeasure) -> VectorMeasure:
    """Project ``nu`` to the E*-valued measure ``t -> sum mass * x*``."""
    rows = [list(zeros(nu.d)) for _ in range(nu.n)]
    for t, x, m in nu.atoms:
        for i in range(nu.d):
            rows[t][i] += m * x[i]
    return VectorMeasure(tuple(tuple(r) for r in rows))


def w_map(mu: VectorMeasure, spec: NormSpec) -> ProductMeasure:
    """The canonical lift: one atom ``(s, mu_s / |mu_s|, |mu_s|)`` per nonzero row."""
    if not spec.polyhedral_kind:
        raise SmoothNormUnsupported("w_map")
    atoms = []
    for s, row in enumerate(mu.values):
        if any(row):
            c = norm_value(spec, row, Side.DUAL)
            atoms.append((s, vscale(1 / c, row), c))
    return ProductMeasure.of(len(mu.values), spec.dim, atoms)


# ---------------------------------------------------------------------------
# Choquet order on the dual ball and comparison in N(mu)


def _barycenter(atoms) -> Vector:
    d = len(atoms[0][0])
    return tuple(sum((m * x[i] for x, m in atoms), ZERO) for i in range(d))


def choquet_leq_ball(spec: NormSpec, sigma1, sigma2) -> bool:
    """``sigma1 < sigma2`` for finitely supported measures ``[(x*, mass)]`` on the dual ball.

    Decided by the dilation LP: split each atom of ``sigma1`` into a measure
    on the support of ``sigma2`` with the same mass and barycenter so that
    the pieces add up to ``sigma2``.
    """
    if not spec.polyhedral_kind:
        raise SmoothNormUnsupported("choquet_leq_ball")
    a1 = [(qvec(x), Fraction(m)) for x, m in sigma1]
    a2 = [(qvec(x), Fraction(m)) for x, m in sigma2]
    if not a1 or not a2:
        raise DegenerateInput("measures must be nonzero")
    if sum(m for _, m in a1) != sum(m for _, m in a2):
        raise BarycenterMismatch("measures have different total mass")
    if _barycenter(a1) != _barycenter(a2):
        raise BarycenterMismatch("measures have different barycenters")
    k1, k2, d = len(a1), len(a2), spec.dim
    N = k1 * k2

    def var(i, j):
        return i * k2 + j

    A, b = [], []
    for i, (x, m) in enumerate(a1):
        row = [ZERO] * N
        for j in range(k2):
            row[var(i, j)] = ONE
        A.append(row)
        b.append(m)
        for r in range(d):
            row = [ZERO] * N
            for j, (y, _) in enumerate(a2):
                row[var(i, j)] = y[r]
            A.append(row)
            b.append(m * x[r])
    for j, (_, m) in enumerate(a2):
        row = [ZERO] * N
        for i in range(k1):
            row[var(i, j)] = ONE
        A.append(row)
        b.append(m)
    out = lp_solve([ZERO] * N, (A, b), None, nonneg=True, face_dim=False)
    return out.status is LPStatus.OPTIMAL


class Comparison(str, Enum):
    LEQ = "Leq"
    GEQ = "Geq"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def in_n_mu(H: FunctionSpace, mu: VectorMeasure, nu: ProductMeasure) -> bool:
    """``nu`` projects to ``mu``, lives on the dual ball and has the mass of ``mu``."""
    return (
        t_star(nu) == mu
        and nu.in_dual_ball(H.target)
        and nu.mass == mu.total_variation(H.target)
    )


def _require_boundary(H: FunctionSpace, mu: VectorMeasure) -> None:
    if not is_boundary_measure(H, mu):
        raise NotMaximal("the measure is not carried by the Choquet boundary")


def n_mu_compare(H: FunctionSpace, mu: VectorMeasure, nu1: ProductMeasure, nu2: ProductMeasure) -> Comparison:
    """Order of two members of ``N(mu)``, decided point by point.

    ``nu1 < nu2`` iff at every ``t`` the kernel of ``nu2`` precedes the kernel
    of ``nu1`` in the Choquet order of the dual ball (the order reverses).
    """
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("n_mu_compare")
    _require_boundary(H, mu)
    for nu in (nu1, nu2):
        if not in_n_mu(H, mu, nu):
            raise NotInNMu("measure is not in N(mu)")
    support = [t for t in range(H.n) if any(mu.values[t])]
    leq = all(choquet_leq_ball(H.target, nu2.kernel(t), nu1.kernel(t)) for t in support)
    geq = all(choquet_leq_ball(H.target, nu1.kernel(t), nu2.kernel(t)) for t in support)
    if leq and geq:
        return Comparison.EQUAL
    if leq:
        return Comparison.LEQ
    if geq:
        return Comparison.GEQ
    return Comparison.INCOMPARABLE


@dataclass(frozen=True)
class NMuMinimal:
    """Minimal elements of ``N(mu)``: kernels on dual-ball vertices with the prescribed barycenters."""

    minimal: ProductMeasure
    unique: bool
    faces: tuple[tuple[int, tuple[Vector, ...]], ...]
    alternative: ProductMeasure | None


def n_mu_minimal(H: FunctionSpace, mu: VectorMeasure) -> NMuMinimal:
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("n_mu_minimal")
    _require_boundary(H, mu)
    spec = H.target
    atoms, alt_atoms, faces = [], [], []
    unique = True
    for t, row in enumerate(mu.values):
        if not any(row):
            continue
        c = norm_value(spec, row, Side.DUAL)
        dec = barycenter_decomposition(spec, vscale(1 / c, row))
        faces.append((t, dec.face))
        atoms += [(t, v, c * w) for v, w in dec.weights]
        if dec.unique:
            alt_atoms += [(t, v, c * w) for v, w in dec.weights]
        else:
            unique = False
            alt_atoms += [(t, v, c * w) for v, w in dec.alternative]
    if not unique and is_simplexoid(spec):
        raise InvariantViolation("a simplexoid dual ball cannot have a non-simplex face")
    first = ProductMeasure.of(H.n, H.d, atoms)
    alt = None if unique else ProductMeasure.of(H.n, H.d, alt_atoms)
    return NMuMinimal(first, unique, tuple(faces), alt)


# ---------------------------------------------------------------------------
# product representation of functionals


@dataclass(frozen=True)
class ProductRepresentation:
    measure: ProductMeasure
    mass: Fraction


def product_representation(H: FunctionSpace, phi) -> ProductRepresentation:
    """Minimal-mass positive measure on ``Ch x ext B_{E*}`` representing ``phi``.

    The mass is checked against :func:`functional_norm`; a mismatch raises
    :class:`MassMismatch`.
    """
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("product_representation")
    if not weak_space(H).contains_constants:
        raise NoConstantsInHw("product representation needs constants in the weak space")
    phi = qvec(phi)
    if len(phi) != H.m:
        raise DegenerateInput(f"functional has {len(phi)} values, H has dimension {H.m}")
    d = H.d
    cols = [(t, v) for t in boundary_indices(H) for v in dual_vertices(H.target)]
    A = [[dot(v, f[t * d:(t + 1) * d]) for t, v in cols] for f in H.basis]
    out = lp_solve([ONE] * len(cols), (A, list(phi)) if A else None, None, nonneg=True, face_dim=False)
    if out.status is not LPStatus.OPTIMAL:
        raise MassMismatch("no representing measure on the boundary product")
    nu = ProductMeasure.of(H.n, d, [(t, v, w) for (t, v), w in zip(cols, out.point) if w])
    norm = functional_norm(H, phi).value
    if out.value != norm:
        raise MassMismatch(f"product mass {fmt(out.value)} differs from the norm {fmt(norm)}")
    return ProductRepresentation(nu, out.value)

