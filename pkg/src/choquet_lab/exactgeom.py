"""Exact rational linear algebra, linear programming and polytope machinery.

Everything here runs over :class:`fractions.Fraction`; there is no
floating-point fallback.  Vectors are plain tuples of Fractions and sort
lexicographically, which gives every output a canonical order.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

try:  # optional fast exact rationals
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None

from .errors import DegenerateInput, DimensionMismatch, PointNotInHull, UnboundedPolyhedron

Rational = Fraction
Vector = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# scalars and vectors


def q(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats and decimal strings are rejected: they would smuggle rounding
    into exact paths.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def qvec(xs: Iterable) -> Vector:
    return tuple(q(x) for x in xs)


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    return str(x)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: Fraction, a: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in a)


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def primitive(v: Sequence[Fraction]) -> Vector:
    """Positive rescaling of ``v`` to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ZERO for _ in v)
    return tuple(Fraction(x // g) for x in ints)


# ---------------------------------------------------------------------------
# linear algebra


def rref(rows: Sequence[Sequence[Fraction]], pivot_limit: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` with the zero rows dropped.  Pivots are only
    searched among the first ``pivot_limit`` columns (all by default), which
    lets callers row-reduce augmented systems.
    """
    M = [[x if type(x) is Fraction else q(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        a = pr[c]
        if a != 1:
            pr = [x / a for x in pr]
            M[r] = pr
        nz = [j for j in range(c, ncols) if pr[j] != 0]
        for i in range(len(M)):
            if i != r:
                f = M[i][c]
                if f != 0:
                    row = M[i]
                    for j in nz:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in M[:r]], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of ``{x : r.x = 0 for every row r}``."""
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    R, piv = rref(rows)
    free = [j for j in range(ncols) if j not in set(piv)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return basis


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int | None = None):
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return zeros(ncols)
    aug = [tuple(r) + (bi,) for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if piv and piv[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for i, p in enumerate(piv):
        x[p] = R[i][ncols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n held by its canonical RREF basis.

    Two subspaces are equal exactly when their bases are equal.
    """

    ambient: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], ambient: int) -> "Subspace":
        vs = [tuple(v) for v in vectors]
        for v in vs:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in Q^{ambient}")
        R, _ = rref(vs) if vs else ([], [])
        return cls(ambient, tuple(R))

    @classmethod
    def kernel(cls, constraints: Iterable[Sequence[Fraction]], ambient: int) -> "Subspace":
        return cls.span(nullspace(list(constraints), ambient), ambient)

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls.span([unit(ambient, i) for i in range(ambient)], ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return rank(list(self.basis) + [tuple(v)]) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        return Subspace.kernel(self.annihilator() + other.annihilator(), self.ambient)

    def annihilator(self) -> list[Vector]:
        """Rows whose common kernel is this subspace."""
        return nullspace(list(self.basis), self.ambient) if self.basis else [
            unit(self.ambient, i) for i in range(self.ambient)
        ]

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of ``v`` in the RREF basis (read off at pivot columns)."""
        piv = [next(j for j, x in enumerate(b) if x != 0) for b in self.basis]
        coords = tuple(v[p] for p in piv)
        recon = [ZERO] * self.ambient
        for c, b in zip(coords, self.basis):
            for j, x in enumerate(b):
                if x:
                    recon[j] += c * x
        if tuple(recon) != tuple(v):
            raise ValueError("vector does not lie in the subspace")
        return coords


# ---------------------------------------------------------------------------
# linear programming


class LPStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    value: Fraction | None = None
    point: Vector | None = None
    optimal_face_dim: int | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _pivot(T, basis, cost, r, j):
    pr = T[r]
    a = pr[j]
    if a != 1:
        pr = [x / a for x in pr]
        T[r] = pr
    nz = [k for k, x in enumerate(pr) if x != 0]
    for i, row in enumerate(T):
        if i != r:
            f = row[j]
            if f != 0:
                for k in nz:
                    row[k] -= f * pr[k]
    f = cost[j]
    if f != 0:
        for k in nz:
            cost[k] -= f * pr[k]
    basis[r] = j


def _pivot_loop(T, basis, cost, ncol) -> bool:
    """Bland's rule; returns False when the objective is unbounded below."""
    while True:
        j = next((j for j in range(ncol) if cost[j] < 0), None)
        if j is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[j]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, cost, best[1], j)


def _simplex_standard(A, b, c):
    """Two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0``.

    The tableau runs on ``gmpy2.mpq`` when available (same exact rationals,
    much cheaper arithmetic); results always come back as Fractions.
    """
    if _mpq is None:
        return _simplex_core(A, b, c, ZERO, ONE)
    A = [[_mpq(x.numerator, x.denominator) for x in row] for row in A]
    b = [_mpq(x.numerator, x.denominator) for x in b]
    c = [_mpq(x.numerator, x.denominator) for x in c]
    status, x, val = _simplex_core(A, b, c, _mpq(0), _mpq(1))
    if status is not LPStatus.OPTIMAL:
        return status, x, val
    return status, [_to_fraction(v) for v in x], _to_fraction(val)


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _simplex_core(A, b, c, ZERO, ONE):
    m, n = len(A), len(c)
    T = []
    for i in range(m):
        row, rhs = list(A[i]), b[i]
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        art = [ZERO] * m
        art[i] = ONE
        T.append(row + art + [rhs])
    basis = list(range(n, n + m))
    cost = [-sum((T[i][j] for i in range(m)), ZERO) for j in range(n)] + [ZERO] * m
    cost.append(-sum((T[i][-1] for i in range(m)), ZERO))
    _pivot_loop(T, basis, cost, n + m)
    if cost[-1] != 0:
        return LPStatus.INFEASIBLE, None, None
    # drive artificial variables out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            k = next((k for k in range(n) if T[i][k] != 0), None)
            if k is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, cost, i, k)
        i += 1
    T = [row[:n] + [row[-1]] for row in T]
    cost = list(c) + [ZERO]
    for i, bi in enumerate(basis):
        f = c[bi]
        if f != 0:
            row = T[i]
            for k in range(n + 1):
                if row[k] != 0:
                    cost[k] -= f * row[k]
    if not _pivot_loop(T, basis, cost, n):
        return LPStatus.UNBOUNDED, None, None
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = T[i][-1]
    return LPStatus.OPTIMAL, x, -cost[-1]


def _rows(system, n):
    if system is None:
        return [], []
    M, rhs = system
    M = [qvec(r) for r in M]
    rhs = qvec(rhs)
    if len(M) != len(rhs):
        raise DimensionMismatch(f"{len(M)} constraint rows but {len(rhs)} right-hand sides")
    for r in M:
        if len(r) != n:
            raise DimensionMismatch(f"constraint row of length {len(r)}, expected {n}")
    return M, list(rhs)


@dataclass(frozen=True)
class LPRecord:
    """One solved program, as passed to :func:`lp_solve`, with its outcome."""

    objective: Vector
    eq: tuple
    ineq: tuple
    nonneg: tuple[bool, ...]
    maximize: bool
    outcome: "LPOutcome"


_recorders: list[list[LPRecord]] = []


@contextmanager
def record_programs():
    """Collect every program solved inside the block (for auditing, e.g. duality checks)."""
    log: list[LPRecord] = []
    _recorders.append(log)
    try:
        yield log
    finally:
        _recorders.remove(log)


@contextmanager
def _paused_recording():
    saved = _recorders[:]
    _recorders.clear()
    try:
        yield
    finally:
        _recorders.extend(saved)


def lp_solve(
    objective: Sequence,
    eq=None,
    ineq=None,
    *,
    nonneg: bool | Sequence[bool] = False,
    maximize: bool = False,
    face_dim: bool = True,
) -> LPOutcome:
    """Exact LP: optimize ``objective . x`` subject to ``A x = b`` and ``G x <= h``.

    ``eq`` and ``ineq`` are ``(matrix, rhs)`` pairs.  Variables are free unless
    ``nonneg`` is set; a sequence of booleans marks individual variables.  When ``face_dim`` is true the affine dimension of the
    whole optimal face is computed as well (not just the vertex returned).
    """
    c = qvec(objective)
    n = len(c)
    A, b = _rows(eq, n)
    G, h = _rows(ineq, n)
    sign = -1 if maximize else 1
    pos = _sign_flags(nonneg, n)
    free = [j for j in range(n) if not pos[j]]
    ns = len(G)

    def expand(row):
        return list(row) + [-row[j] for j in free]

    rows, rhs = [], []
    for a, bi in zip(A, b):
        rows.append(expand(a) + [ZERO] * ns)
        rhs.append(bi)
    for k, (g, hk) in enumerate(zip(G, h)):
        slack = [ZERO] * ns
        slack[k] = ONE
        rows.append(expand(g) + slack)
        rhs.append(hk)
    cs = expand([sign * x for x in c]) + [ZERO] * ns
    status, z, val = _simplex_standard(rows, rhs, cs)
    if status is not LPStatus.OPTIMAL:
        return _record(c, A, b, G, h, pos, maximize, LPOutcome(status))
    x = list(z[:n])
    for k, j in enumerate(free):
        x[j] -= z[n + k]
    x = tuple(x)
    value = sign * val
    fd = None
    if face_dim:
        fd = _face_dimension(n, A + [c], b + [value], G, h, pos)
    return _record(c, A, b, G, h, pos, maximize, LPOutcome(LPStatus.OPTIMAL, value, x, fd))


def _record(c, A, b, G, h, pos, maximize, outcome: LPOutcome) -> LPOutcome:
    if _recorders:
        rec = LPRecord(c, (tuple(map(tuple, A)), tuple(b)), (tuple(map(tuple, G)), tuple(h)), tuple(pos),
                       maximize, outcome)
        for log in _recorders:
            log.append(rec)
    return outcome


def _sign_flags(nonneg, n: int) -> list[bool]:
    if isinstance(nonneg, bool):
        return [nonneg] * n
    flags = [bool(x) for x in nonneg]
    if len(flags) != n:
        raise DimensionMismatch(f"{len(flags)} sign flags for {n} variables")
    return flags


def _face_dimension(n, A, b, G, h, nonneg) -> int:
    """Affine dimension of ``{A x = b, G x <= h (, x >= 0)}``, assumed nonempty.

    Implicit equalities are detected by repeatedly maximizing a capped sum of
    slacks; a constraint that gets positive slack is never implicit.
    """
    ineq = list(zip(G, h))
    ineq += [(vscale(-ONE, unit(n, i)), ZERO) for i in range(n) if nonneg[i]]
    cand = list(range(len(ineq)))
    while cand:
        k = len(cand)
        obj = [ZERO] * n + [ONE] * k
        eq_rows = [list(a) + [ZERO] * k for a in A]
        G2, h2 = [], []
        for idx, (g, hg) in enumerate(ineq):
            row = list(g) + [ZERO] * k
            if idx in cand:
                row[n + cand.index(idx)] = ONE
            G2.append(row)
            h2.append(hg)
        for j in range(k):
            up = [ZERO] * (n + k)
            up[n + j] = ONE
            G2.append(up)
            h2.append(ONE)
            G2.append([-x for x in up])
            h2.append(ZERO)
        out = lp_solve(obj, (eq_rows, b), (G2, h2), maximize=True, face_dim=False)
        if not out.optimal or out.value == 0:
            break
        y = out.point[n:]
        cand = [i for i, yi in zip(cand, y) if yi == 0]
    implicit = [ineq[i][0] for i in cand]
    return n - rank(list(A) + implicit)


def lp_dual(objective, eq=None, ineq=None, *, nonneg=False, maximize=False) -> LPOutcome:
    """Solve the Lagrangian dual of the :func:`lp_solve` problem independently.

    The returned value is expressed in the primal's sense, so under strong
    duality it equals the primal optimum.  The point is ``(y, z)``: the
    multipliers of the equalities followed by those of the inequalities.
    """
    c = qvec(objective)
    n = len(c)
    A, b = _rows(eq, n)
    G, h = _rows(ineq, n)
    if maximize:
        c = tuple(-x for x in c)
    my, mz = len(A), len(G)
    pos = _sign_flags(nonneg, n)
    # max b.y - h.z  s.t.  (A^T y - G^T z)_j = c_j for free x_j, <= c_j for x_j >= 0;  z >= 0
    cols = [[A[i][j] for i in range(my)] + [-G[k][j] for k in range(mz)] for j in range(n)]
    obj = list(b) + [-x for x in h]
    zpos = [[ZERO] * my + [(-ONE if kk == k else ZERO) for kk in range(mz)] for k in range(mz)]
    eq_rows = [cols[j] for j in range(n) if not pos[j]]
    eq_rhs = [c[j] for j in range(n) if not pos[j]]
    le_rows = [cols[j] for j in range(n) if pos[j]] + zpos
    le_rhs = [c[j] for j in range(n) if pos[j]] + [ZERO] * mz
    with _paused_recording():
        out = lp_solve(obj, (eq_rows, eq_rhs) if eq_rows else None, (le_rows, le_rhs) if le_rows else None,
                       maximize=True, face_dim=False)
    if not out.optimal:
        return out
    value = -out.value if maximize else out.value
    return LPOutcome(LPStatus.OPTIMAL, value, out.point, None)


def feasible_point(eq=None, ineq=None, n: int | None = None, *, nonneg=False):
    """Some point of the polyhedron, or None when it is empty."""
    if n is None:
        src = eq if eq is not None else ineq
        n = len(src[0][0])
    out = lp_solve([ZERO] * n, eq, ineq, nonneg=nonneg, face_dim=False)
    return out.point if out.optimal else None


def polyhedron_dim(eq, ineq, n: int) -> int:
    """Affine dimension of a polyhedron, or -1 when it is empty."""
    A, b = _rows(eq, n)
    G, h = _rows(ineq, n)
    if feasible_point((A, b) if A else None, (G, h) if G else None, n) is None:
        return -1
    return _face_dimension(n, A, b, G, h, [False] * n)


# ---------------------------------------------------------------------------
# polytopes


def _dd_rays(R: list[Vector], dim: int) -> list[Vector]:
    """Extreme rays of the pointed cone ``{y : r.y <= 0 for all rows r}``.

    Double description with the combinatorial adjacency test.  Assumes the
    rows have full column rank.
    """
    chosen: list[int] = []
    for i, r in enumerate(R):
        if rank([R[j] for j in chosen] + [r]) > len(chosen):
            chosen.append(i)
            if len(chosen) == dim:
                break
    R0 = [R[i] for i in chosen]
    rays = []
    for j in range(dim):
        y = solve(R0, [(-ONE if k == j else ZERO) for k in range(dim)], dim)
        tight = frozenset(chosen[k] for k in range(dim) if k != j)
        rays.append((primitive(y), tight))
    done = set(chosen)
    for i, r in enumerate(R):
        if i in done:
            continue
        pos, neg, keep = [], [], []
        for y, z in rays:
            s = dot(r, y)
            if s > 0:
                pos.append((y, z, s))
            elif s < 0:
                neg.append((y, z, s))
                keep.append((y, z))
            else:
                keep.append((y, z | {i}))
        new = []
        for yp, zp, sp in pos:
            for yn, zn, sn in neg:
                common = zp & zn
                if len(common) < dim - 2:
                    continue
                if any(
                    common <= z and y is not yp and y is not yn for y, z in rays
                ):
                    continue
                y = primitive(tuple(sp * a - sn * b for a, b in zip(yn, yp)))
                new.append((y, common | {i}))
        rays = keep + new
        done.add(i)
    return [y for y, _ in rays]


def _affine_param(eq, dim):
    """Parametrize ``{x : eq}`` as ``x0 + N z``; returns None when empty."""
    if not eq:
        return zeros(dim), [unit(dim, i) for i in range(dim)]
    A = [a for a, _ in eq]
    b = [bb for _, bb in eq]
    x0 = solve(A, b, dim)
    if x0 is None:
        return None
    return x0, nullspace(A, dim)


def vertex_enumeration(facets, eq=(), dim: int | None = None) -> list[Vector]:
    """All extreme points of ``{x : a.x <= b for (a, b) in facets, eq}``.

    ``eq`` holds ``(a, b)`` pairs meaning ``a.x = b``.  The result is exact,
    deduplicated and sorted.  Raises :class:`UnboundedPolyhedron` when the
    set is nonempty and unbounded.
    """
    facets = [(qvec(a), q(b)) for a, b in facets]
    eq = [(qvec(a), q(b)) for a, b in eq]
    if dim is None:
        src = facets or eq
        if not src:
            raise DimensionMismatch("cannot infer the dimension of an empty system")
        dim = len(src[0][0])
    for a, _ in facets + eq:
        if len(a) != dim:
            raise DimensionMismatch(f"constraint of length {len(a)} in Q^{dim}")
    param = _affine_param(eq, dim)
    if param is None:
        return []
    x0, N = param
    k = len(N)
    if k == 0:
        return [x0] if all(dot(a, x0) <= b for a, b in facets) else []
    R = []
    for a, b in facets:
        R.append(tuple(dot(a, col) for col in N) + (-(b - dot(a, x0)),))
    R.append(zeros(k) + (-ONE,))
    if rank(R) < k + 1:
        G = [tuple(r[:k]) for r in R[:-1]]
        h = [-r[k] for r in R[:-1]]
        if G and feasible_point(None, (G, h), k) is None:
            return []
        raise UnboundedPolyhedron("the polyhedron contains a line")
    verts, recession = set(), False
    for y in _dd_rays(R, k + 1):
        lam = y[k]
        if lam > 0:
            z = [c / lam for c in y[:k]]
            x = list(x0)
            for zi, col in zip(z, N):
                if zi:
                    for j, cj in enumerate(col):
                        if cj:
                            x[j] += zi * cj
            verts.add(tuple(x))
        else:
            recession = True
    if recession and verts:
        raise UnboundedPolyhedron("the polyhedron has a recession direction")
    return sorted(verts)


def in_convex_hull(p: Sequence[Fraction], points: Sequence[Sequence[Fraction]]) -> bool:
    """LP feasibility of ``p = sum l_i g_i`` with ``l >= 0``, ``sum l = 1``."""
    pts = [tuple(g) for g in points]
    if not pts:
        return False
    d = len(p)
    A = [[g[j] for g in pts] for j in range(d)] + [[ONE] * len(pts)]
    b = list(p) + [ONE]
    return feasible_point((A, b), None, len(pts), nonneg=True) is not None


def convex_weights(p, points):
    """Some convex weights expressing ``p`` over ``points``, or None."""
    pts = [tuple(g) for g in points]
    d = len(p)
    A = [[g[j] for g in pts] for j in range(d)] + [[ONE] * len(pts)]
    return feasible_point((A, list(p) + [ONE]), None, len(pts), nonneg=True)


def is_extreme_point(p: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    """Whether ``p`` is an extreme point of ``conv(generators)``.

    Copies of ``p`` are removed first; ``p`` is extreme iff it is not a convex
    combination of what remains.  Raises :class:`PointNotInHull` if ``p`` is
    not in the hull at all.
    """
    p = tuple(p)
    gens = [tuple(g) for g in generators]
    rest = sorted({g for g in gens if g != p})
    covered = in_convex_hull(p, rest)
    if p in gens:
        return not covered
    if covered:
        return False
    raise PointNotInHull(f"{tuple(map(fmt, p))} is not in the convex hull of the generators")


def extreme_points(points: Sequence[Sequence[Fraction]]) -> list[Vector]:
    pts = sorted({tuple(p) for p in points})
    return [p for p in pts if is_extreme_point(p, pts)]


def affine_dim(points: Sequence[Sequence[Fraction]]) -> int:
    pts = [tuple(p) for p in points]
    if not pts:
        return -1
    return rank([vsub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


@dataclass(frozen=True)
class HRep:
    """Facet description relative to the affine hull of a point set.

    ``facets[i] = (a, b)`` means ``a.x <= b``; ``equalities`` cut out the
    affine hull; ``incidence[i]`` lists the indices (into ``vertices``) of
    the vertices lying on facet ``i``.
    """

    dim: int
    vertices: tuple[Vector, ...]
    equalities: tuple[tuple[Vector, Fraction], ...]
    facets: tuple[tuple[Vector, Fraction], ...]
    incidence: tuple[tuple[int, ...], ...]

    @property
    def affine_dim(self) -> int:
        return self.dim - len(self.equalities)


def _canon_ineq(a, b):
    v = primitive(tuple(a) + (b,))
    return v[:-1], v[-1]


def facet_enumeration(points: Sequence[Sequence[Fraction]]) -> HRep:
    """Irredundant facets (with incidences) of ``conv(points)``.

    Works relative to the affine hull: the points are centred at their
    centroid, expressed in pivot coordinates of the hull, and the facets are
    read off as the vertices of the polar.
    """
    pts = sorted({qvec(p) for p in points})
    if len(pts) < 2:
        raise DegenerateInput("facet enumeration needs at least two distinct points")
    dim = len(pts[0])
    c = tuple(sum(col, ZERO) / len(pts) for col in zip(*pts))
    diffs = [vsub(p, c) for p in pts]
    span = Subspace.span(diffs, dim)
    piv = [next(j for j, x in enumerate(b) if x != 0) for b in span.basis]
    k = len(piv)
    coords = [tuple(v[j] for j in piv) for v in diffs]
    polar = vertex_enumeration([(z, ONE) for z in coords], dim=k)
    eqs = []
    for w in span.annihilator():
        eqs.append(_canon_ineq(w, dot(w, c)))
    facets = []
    for y in polar:
        a = [ZERO] * dim
        for j, yj in zip(piv, y):
            a[j] = yj
        facets.append(_canon_ineq(a, ONE + dot(a, c)))
    facets.sort()
    # vertices are the points lying on at least k facets whose normals span
    verts = []
    for p, z in zip(pts, coords):
        tight = [y for y in polar if dot(y, z) == 1]
        if len(tight) >= k and rank(tight) == k:
            verts.append(p)
    incidence = tuple(
        tuple(i for i, v in enumerate(verts) if dot(a, v) == b) for a, b in facets
    )
    return HRep(dim, tuple(verts), tuple(sorted(eqs)), tuple(facets), incidence)


@dataclass(frozen=True)
class Polytope:
    """A bounded polytope with its V-representation and, optionally, facets."""

    dim: int
    vertices: tuple[Vector, ...]
    facets: tuple[tuple[Vector, Fraction], ...] | None = None
    equalities: tuple[tuple[Vector, Fraction], ...] | None = None

    @classmethod
    def from_points(cls, points, dim: int | None = None) -> "Polytope":
        pts = [qvec(p) for p in points]
        if dim is None:
            dim = len(pts[0])
        return cls(dim, tuple(extreme_points(pts)))

    @classmethod
    def from_hrep(cls, facets, eq=(), dim: int | None = None) -> "Polytope":
        facets = [(qvec(a), q(b)) for a, b in facets]
        eq = [(qvec(a), q(b)) for a, b in eq]
        if dim is None:
            dim = len((facets or eq)[0][0])
        verts = vertex_enumeration(facets, eq, dim)
        return cls(dim, tuple(verts), tuple(facets), tuple(eq))

    @property
    def rep_status(self) -> str:
        return "V" if self.facets is None else "VH"

    @property
    def affine_dim(self) -> int:
        return affine_dim(self.vertices)

    @property
    def is_simplex(self) -> bool:
        return len(self.vertices) == self.affine_dim + 1

    def with_facets(self) -> "Polytope":
        if self.facets is not None:
            return self
        if len(self.vertices) < 2:
            v = self.vertices[0]
            eqs = tuple((unit(self.dim, i), v[i]) for i in range(self.dim))
            return Polytope(self.dim, self.vertices, (), eqs)
        h = facet_enumeration(self.vertices)
        return Polytope(self.dim, self.vertices, h.facets, h.equalities)

    def contains(self, p) -> bool:
        return in_convex_hull(qvec(p), self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)
