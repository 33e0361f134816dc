"""Finite function spaces H inside C(K, E) and their derived scalar spaces.

K is a finite list of labelled points and E is Q^d with a :class:`NormSpec`.
An element of H is a flat vector of length n*d, point-major: coordinate
``s*d + i`` is the i-th component of the value at the s-th point.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInput, DimensionMismatch, NoConstants, SamePoint, SmoothNormUnsupported
from .exactgeom import (
    ONE,
    ZERO,
    Polytope,
    Subspace,
    Vector,
    dot,
    extreme_points,
    lp_solve,
    qvec,
    rank,
    unit,
)
from .normed_space import NormSpec, dual_vertices, norm_value

OperatorMatrix = tuple  # d rows of length m


@dataclass(frozen=True)
class FunctionSpace:
    """A linear space of E-valued functions on a finite point set.

    ``basis`` holds m linearly independent flat vectors of length n*d.
    """

    points: tuple[str, ...]
    target: NormSpec
    basis: tuple[Vector, ...]

    def __post_init__(self):
        if not self.points:
            raise DegenerateInput("K must have at least one point")
        if len(set(self.points)) != len(self.points):
            raise DegenerateInput("point labels must be unique")
        if not self.basis:
            raise DegenerateInput("H must have a nonzero basis")
        for b in self.basis:
            if len(b) != self.n * self.d:
                raise DimensionMismatch(f"basis vector of length {len(b)}, expected {self.n * self.d}")
        if rank(list(self.basis)) != len(self.basis):
            raise DegenerateInput("basis vectors are linearly dependent")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_functions(cls, points, target: NormSpec, functions) -> "FunctionSpace":
        """Build from a list of functions, each an n x d nested array."""
        flat = [qvec(x for row in f for x in row) for f in functions]
        return cls(tuple(points), target, tuple(flat))

    @classmethod
    def spanned_by(cls, points, target: NormSpec, vectors) -> "FunctionSpace":
        """Canonical (RREF) basis of the span of arbitrary flat vectors."""
        n = len(points)
        sub = Subspace.span([qvec(v) for v in vectors], n * target.dim)
        return cls(tuple(points), target, sub.basis)

    @classmethod
    def from_constraints(cls, points, target: NormSpec, constraints) -> "FunctionSpace":
        """The kernel of linear constraints, each an n x d coefficient array."""
        n = len(points)
        rows = [qvec(x for row in c for x in row) for c in constraints]
        sub = Subspace.kernel(rows, n * target.dim)
        return cls(tuple(points), target, sub.basis)

    @classmethod
    def full(cls, points, target: NormSpec) -> "FunctionSpace":
        n = len(points)
        return cls(tuple(points), target, tuple(unit(n * target.dim, i) for i in range(n * target.dim)))

    def with_target(self, target: NormSpec) -> "FunctionSpace":
        return FunctionSpace(self.points, target, self.basis)

    # -- shape -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return self.target.dim

    @property
    def m(self) -> int:
        return len(self.basis)

    def index(self, label) -> int:
        """Position of a point: labels are strings, plain ints are positions."""
        if isinstance(label, int) and not isinstance(label, bool):
            if not 0 <= label < self.n:
                raise DegenerateInput(f"point index {label} out of range")
            return label
        label = str(label)
        try:
            return self.points.index(label)
        except ValueError:
            raise DegenerateInput(f"unknown point {label!r}") from None

    def value(self, h: Sequence[Fraction], s: int) -> Vector:
        d = self.d
        return tuple(h[s * d:(s + 1) * d])

    def eval_matrix(self, t: int) -> OperatorMatrix:
        """phi_H(t) as a d x m matrix: column j is h_j(t)."""
        d = self.d
        return tuple(tuple(b[t * d + i] for b in self.basis) for i in range(d))

    def combine(self, coeffs: Sequence[Fraction]) -> Vector:
        out = [ZERO] * (self.n * self.d)
        for c, b in zip(coeffs, self.basis):
            if c:
                for k, x in enumerate(b):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def subspace(self) -> Subspace:
        return Subspace.span(self.basis, self.n * self.d)

    def contains(self, f: Sequence[Fraction]) -> bool:
        return rank(list(self.basis) + [tuple(f)]) == self.m

    def functional_at(self, t: int, x_star: Sequence[Fraction]) -> Vector:
        """Values of x* o phi_H(t) on the basis."""
        x_star = qvec(x_star)
        return tuple(dot(x_star, self.value(b, t)) for b in self.basis)

    def sup_norm(self, f: Sequence[Fraction]) -> Fraction:
        return max(norm_value(self.target, self.value(f, s)) for s in range(self.n))

    def unit_ball_constraints(self):
        """``G c <= 1`` describing ``{c : ||sum c_j h_j|| <= 1}`` (polyhedral E)."""
        if not self.target.polyhedral_kind:
            raise SmoothNormUnsupported("unit_ball_constraints")
        G = []
        for s in range(self.n):
            for w in dual_vertices(self.target):
                G.append(tuple(dot(w, self.value(b, s)) for b in self.basis))
        return G, [ONE] * len(G)


@dataclass(frozen=True)
class ScalarSpace:
    """A scalar function space on the same points, with canonical basis."""

    points: tuple[str, ...]
    space: Subspace

    @property
    def basis(self) -> tuple[Vector, ...]:
        return self.space.basis

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def n(self) -> int:
        return len(self.points)

    def evaluation(self, t: int) -> Vector:
        """phi(t) in basis coordinates: the values of the basis functions at t."""
        return tuple(b[t] for b in self.basis)

    def contains(self, f) -> bool:
        return self.space.contains(qvec(f))

    @property
    def contains_constants(self) -> bool:
        return self.space.contains((ONE,) * self.n)

    def as_function_space(self) -> FunctionSpace:
        return FunctionSpace(self.points, NormSpec.linf(1), self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarSpace) and self.points == other.points and self.space == other.space

    def __hash__(self) -> int:
        return hash((self.points, self.space))


def coordinate_slices(H: FunctionSpace) -> list[Vector]:
    """All scalar functions e_i* o h_j."""
    d = H.d
    return [tuple(b[s * d + i] for s in range(H.n)) for b in H.basis for i in range(d)]


def weak_space(H: FunctionSpace) -> ScalarSpace:
    """span{x* o h}: the coordinate slices span it because coordinates span E*."""
    return ScalarSpace(H.points, Subspace.span(coordinate_slices(H), H.n))


class Constants(str, Enum):
    FULL = "Full"
    SOME = "Some"
    NONE = "None"


def constant_values(H: FunctionSpace) -> Subspace:
    """``{x in E : the constant function x lies in H}``."""
    consts = [tuple(x for _ in range(H.n) for x in unit(H.d, i)) for i in range(H.d)]
    # solve sum_i x_i const_i in H  <=>  the stacked system has a kernel
    Hs = H.subspace()
    ann = Hs.annihilator()
    rows = [tuple(dot(a, c) for c in consts) for a in ann]
    return Subspace.kernel(rows, H.d)


def constants_status(H: FunctionSpace) -> Constants:
    dim = constant_values(H).dim
    if dim == H.d:
        return Constants.FULL
    return Constants.SOME if dim > 0 else Constants.NONE


def separates_points(rows: Sequence[Sequence[Fraction]], n: int, width: int = 1) -> bool:
    """Whether the functions in ``rows`` separate every pair of points."""
    for s in range(n):
        for t in range(s + 1, n):
            if all(r[s * width:(s + 1) * width] == r[t * width:(t + 1) * width] for r in rows):
                return False
    return True


@dataclass(frozen=True)
class StructureReport:
    separates: bool
    separates_direct: bool
    constants: Constants
    constants_w: bool
    H_t: Subspace
    H_st: Subspace
    H_s_minus_t: Subspace


def structure_report(H: FunctionSpace, s, t) -> StructureReport:
    si, ti = H.index(s), H.index(t)
    if si == ti:
        raise SamePoint("structure_report needs two distinct points")
    Hw = weak_space(H)
    return StructureReport(
        separates=separates_points(Hw.basis, H.n),
        separates_direct=separates_points(H.basis, H.n, H.d),
        constants=constants_status(H),
        constants_w=Hw.contains_constants,
        H_t=Subspace.span([H.value(b, ti) for b in H.basis], H.d),
        H_st=Subspace.span([H.value(b, si) + H.value(b, ti) for b in H.basis], 2 * H.d),
        H_s_minus_t=Subspace.span([tuple(a - c for a, c in zip(H.value(b, si), H.value(b, ti))) for b in H.basis], H.d),
    )


def point_image(H: FunctionSpace, t: int) -> Subspace:
    """H(t) = {h(t) : h in H}."""
    return Subspace.span([H.value(b, t) for b in H.basis], H.d)


# ---------------------------------------------------------------------------
# evaluation norms


def scalar_eval_norm(S: ScalarSpace, t: int) -> Fraction:
    """||phi_S(t)|| = max f(t) over ``||f||_oo <= 1``."""
    B = S.basis
    G = [tuple(b[s] for b in B) for s in range(S.n)]
    G += [tuple(-x for x in g) for g in G]
    return lp_solve(S.evaluation(t), None, (G, [ONE] * len(G)), maximize=True, face_dim=False).value


def functional_sup(H: FunctionSpace, phi: Sequence[Fraction]) -> Fraction:
    """``sup phi(h)`` over the unit ball of H (phi given by its basis values)."""
    G, h = H.unit_ball_constraints()
    return lp_solve(qvec(phi), None, (G, h), maximize=True, face_dim=False).value


def hl_norm(H: FunctionSpace, t: int, x_star) -> Fraction:
    """||phi_{H_l}(t, x*)|| = ||x* o phi_H(t)||."""
    return functional_sup(H, H.functional_at(t, x_star))


def operator_norm_at(H: FunctionSpace, t: int) -> Fraction:
    """||phi_H(t)||: the sup over dual-ball vertices of ||phi_{H_l}(t, v)||.

    The sup over the dual sphere is attained at vertices since
    ``y -> ||phi_{H_l}(t, y)||`` is convex and positively homogeneous.
    """
    return max(hl_norm(H, t, v) for v in dual_vertices(H.target))


def operator_norm_direct(H: FunctionSpace, t: int) -> Fraction:
    """||phi_H(t)|| = sup ||h(t)|| over B_H, maximizing each facet form of the E-norm."""
    return max(functional_sup(H, H.functional_at(t, w)) for w in dual_vertices(H.target))


def hs_evaluation(H: FunctionSpace, t: int, x_star, Hw: ScalarSpace | None = None) -> Vector:
    """phi_{H_s}(t, x*) as a vector: (H_w-basis values at t ; x* o h_j(t))."""
    Hw = Hw or weak_space(H)
    return Hw.evaluation(t) + H.functional_at(t, x_star)


def hs_norm(H: FunctionSpace, t: int, x_star) -> Fraction:
    """||phi_{H_s}(t, x*)||, an LP over pairs (g in H_w, h in H).

    Elements of H_s are affine in the dual variable, so the sup norm over
    K x B_{E*} is attained at dual-ball vertices.
    """
    Hw = weak_space(H)
    G = []
    for s in range(H.n):
        for v in dual_vertices(H.target):
            row = hs_evaluation(H, s, v, Hw)
            G.append(row)
            G.append(tuple(-x for x in row))
    obj = hs_evaluation(H, t, x_star, Hw)
    return lp_solve(obj, None, (G, [ONE] * len(G)), maximize=True, face_dim=False).value


@dataclass(frozen=True)
class EvaluationNorms:
    phi_H: Fraction
    phi_Hw: Fraction
    phi_Hl: Fraction | None
    phi_Hs: Fraction


def evaluation_norms(H: FunctionSpace, t, x_star=None) -> EvaluationNorms:
    """Norms of the four evaluation functionals/operators at ``t``.

    Postconditions from the evaluation-norm identities are enforced: the chain
    ``phi_H <= phi_Hw = phi_Hs <= 1``; with constants ``phi_Hl = ||x*||``
    and ``phi_H = 1``; with some constants the chain collapses to equalities.
    """
    from .errors import InvariantViolation

    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("evaluation_norms")
    ti = H.index(t)
    xs = qvec(x_star) if x_star is not None else None
    if xs is not None and norm_value(H.target, xs, "Dual") > 1:
        raise DegenerateInput("x* must lie in the dual unit ball")
    Hw = weak_space(H)
    phi_H = operator_norm_at(H, ti)
    phi_Hw = scalar_eval_norm(Hw, ti)
    phi_Hl = hl_norm(H, ti, xs) if xs is not None else None
    phi_Hs = hs_norm(H, ti, xs if xs is not None else (ZERO,) * H.d)
    checks = [phi_H <= phi_Hw, phi_Hw == phi_Hs, phi_Hs <= 1]
    status = constants_status(H)
    if status is Constants.FULL:
        checks.append(phi_H == 1)
        if xs is not None:
            checks.append(phi_Hl == norm_value(H.target, xs, "Dual"))
    if status is not Constants.NONE:
        checks.append(phi_H == phi_Hw == phi_Hs)
    if Hw.contains_constants:
        checks.append(phi_Hw == 1)
    if not all(checks):
        raise InvariantViolation(f"evaluation-norm identities fail at {t!r}")
    return EvaluationNorms(phi_H, phi_Hw, phi_Hl, phi_Hs)


# ---------------------------------------------------------------------------
# theta collapses


def theta_collapses(H: FunctionSpace) -> list[tuple[str, str, int]]:
    """All ``(s, t, a)`` with ``phi(t) = a phi(s)``, ``a = +-1``, computed on H_w.

    Pairs are listed once with ``s`` before ``t``; ``(t, t, -1)`` marks a
    vanishing evaluation.
    """
    Hw = weak_space(H)
    ev = [Hw.evaluation(t) for t in range(H.n)]
    out = []
    for s in range(H.n):
        for t in range(s, H.n):
            for a in (1, -1):
                if s == t and a == 1:
                    continue
                if ev[t] == tuple(a * x for x in ev[s]):
                    out.append((H.points[s], H.points[t], a))
    return out


def theta_collapses_direct(H: FunctionSpace) -> list[tuple[str, str, int]]:
    """Same as :func:`theta_collapses` but on the operators phi_H(t) themselves."""
    ev = [H.eval_matrix(t) for t in range(H.n)]
    out = []
    for s in range(H.n):
        for t in range(s, H.n):
            for a in (1, -1):
                if s == t and a == 1:
                    continue
                if ev[t] == tuple(tuple(a * x for x in r) for r in ev[s]):
                    out.append((H.points[s], H.points[t], a))
    return out


# ---------------------------------------------------------------------------
# representable operators


@dataclass(frozen=True)
class NotRepresentable:
    pass


@dataclass(frozen=True)
class Representable:
    norm_r: Fraction
    witness: Vector  # a scalar measure of minimal total variation


def min_l1_representation(rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction], n: int,
                          support: Iterable[int] | None = None, face_dim: bool = False):
    """``min sum |mu_s|`` subject to ``rows . mu = target`` (split mu = mu+ - mu-).

    Returns the LP outcome in the lifted variables and the recovered mu.
    """
    allowed = set(range(n)) if support is None else set(support)
    A, b = [], []
    for r, v in zip(rows, target):
        A.append(list(r) + [-x for x in r])
        b.append(v)
    for s in range(n):
        if s not in allowed:
            A.append([ONE if j in (s, n + s) else ZERO for j in range(2 * n)])
            b.append(ZERO)
    out = lp_solve([ONE] * (2 * n), (A, b) if A else None, None, nonneg=True, face_dim=face_dim)
    if not out.optimal:
        return out, None
    mu = tuple(out.point[s] - out.point[n + s] for s in range(n))
    return out, mu


def representable_operator(H: FunctionSpace, U) -> NotRepresentable | Representable:
    """Whether ``U`` (d x m) is a Bochner integral of the evaluations.

    The LP minimizes total variation subject to ``sum mu_s h_j(s) = U h_j``.
    """
    U = [qvec(r) for r in U]
    if len(U) != H.d or any(len(r) != H.m for r in U):
        raise DimensionMismatch("operator must be a d x m matrix")
    rows, target = [], []
    for j, b in enumerate(H.basis):
        for i in range(H.d):
            rows.append(tuple(b[s * H.d + i] for s in range(H.n)))
            target.append(U[i][j])
    out, mu = min_l1_representation(rows, target, H.n)
    if mu is None:
        return NotRepresentable()
    return Representable(out.value, mu)


def upsilon(H: FunctionSpace, phi_w: Sequence[Fraction]) -> OperatorMatrix:
    """The operator ``h -> (phi(e_i* o h))_i`` for phi in H_w* (given on the H_w basis)."""
    Hw = weak_space(H)
    phi_w = qvec(phi_w)
    d = H.d
    out = []
    for i in range(d):
        row = []
        for b in H.basis:
            slice_ = tuple(b[s * d + i] for s in range(H.n))
            row.append(dot(Hw.space.coordinates(slice_), phi_w))
        out.append(tuple(row))
    return tuple(out)


def state_space(S: ScalarSpace) -> Polytope:
    """Convex hull of the point evaluations, in basis coordinates."""
    if not S.contains_constants:
        raise NoConstants("the state space needs the constant one function")
    return Polytope(S.dim, tuple(extreme_points([S.evaluation(t) for t in range(S.n)])))
