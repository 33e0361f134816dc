"""Choquet boundary of a finite function space and boundary measures.

Every characterization below is an exact extreme-point test:

* ``cond1`` -- the operator ``phi_H(t)`` is extreme in ``conv(+-phi_H(K))``
  (operators flattened to vectors of length d*m);
* ``cond2`` -- ``phi_{H_w}(t)`` is extreme in ``conv(+-phi_{H_w}(K))``, the dual
  ball of ``H_w`` (``H_w`` carries the sup norm);
* ``cond3`` -- ``phi_{H_s}(t, x*)`` is extreme in the dual ball of ``H_s`` for
  some ``x*`` in the dual ball of E;
* ``cond4`` -- the same for some extreme ``e*``;
* ``cond5`` -- the same for every extreme ``e*`` (decided only when
  ``H(t) = E``, where it is equivalent to the others).

Elements of ``H_s`` are affine in the dual variable, so the dual ball of
``H_s`` is the convex hull of ``+-phi_{H_s}(s, v)`` with ``v`` ranging over
the vertices of the dual ball of E.  ``cond3`` cannot scan the whole dual
ball; it scans ``0``, the dual-ball vertices and the facet barycenters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import SmoothNormUnsupported
from .exactgeom import ONE, Vector, dot, facet_enumeration, is_extreme_point, rank, vertex_enumeration, zeros
from .function_space import FunctionSpace, ScalarSpace, hs_evaluation, point_image, weak_space
from .normed_space import dual_vertices


def _neg(v: Sequence) -> Vector:
    return tuple(-x for x in v)


def _symmetric(points) -> list[Vector]:
    pts = {tuple(p) for p in points}
    pts |= {_neg(p) for p in pts}
    return sorted(pts)


def boundary_indices_w(Hw: ScalarSpace) -> tuple[int, ...]:
    evals = [Hw.evaluation(t) for t in range(Hw.n)]
    gens = _symmetric(evals)
    return tuple(t for t in range(Hw.n) if is_extreme_point(evals[t], gens))


@lru_cache(maxsize=256)
def boundary_indices(H: FunctionSpace) -> tuple[int, ...]:
    """Indices of the points whose H_w-evaluation is an extreme point of the dual ball."""
    return boundary_indices_w(weak_space(H))


def choquet_boundary(H: FunctionSpace) -> tuple[str, ...]:
    return tuple(H.points[t] for t in boundary_indices(H))


def _flat_operator(H: FunctionSpace, t: int) -> Vector:
    return tuple(x for row in H.eval_matrix(t) for x in row)


def operator_extreme(H: FunctionSpace, t: int) -> bool:
    """``phi_H(t)`` extreme in the absolutely convex hull of all evaluations."""
    gens = _symmetric(_flat_operator(H, s) for s in range(H.n))
    return is_extreme_point(_flat_operator(H, t), gens)


def probe_dual_points(H: FunctionSpace) -> list[Vector]:
    """``0``, the dual-ball vertices and the facet barycenters of the dual ball."""
    verts = list(dual_vertices(H.target))
    out = {zeros(H.d)} | set(verts)
    if H.d > 1:
        hrep = facet_enumeration(verts)
        for inc in hrep.incidence:
            face = [hrep.vertices[i] for i in inc]
            out.add(tuple(sum(col) / len(face) for col in zip(*face)))
    return sorted(out)


@lru_cache(maxsize=64)
def _hs_generators(H: FunctionSpace) -> tuple[Vector, ...]:
    Hw = weak_space(H)
    return tuple(_symmetric(hs_evaluation(H, s, v, Hw) for s in range(H.n) for v in dual_vertices(H.target)))


def hs_extreme(H: FunctionSpace, t: int, x_star: Sequence) -> bool:
    """``phi_{H_s}(t, x*)`` extreme in the dual ball of ``H_s``."""
    return is_extreme_point(hs_evaluation(H, t, tuple(x_star)), _hs_generators(H))


@lru_cache(maxsize=64)
def operator_ball(H: FunctionSpace) -> tuple[Vector, ...]:
    """Inequality normals of ``B_{L(H,E)}`` on flattened d x m operators.

    ``||U|| <= 1`` iff ``<w, U c> <= 1`` for every vertex ``w`` of the dual
    ball of E and every vertex ``c`` of the unit ball of H (coefficients).
    """
    G, h = H.unit_ball_constraints()
    ball = vertex_enumeration(list(zip(G, h)), dim=H.m)
    normals = set()
    for w in dual_vertices(H.target):
        for c in ball:
            normals.add(tuple(w[i] * c[j] for i in range(H.d) for j in range(H.m)))
    return tuple(sorted(normals))


def operator_ball_extreme(H: FunctionSpace, t: int) -> bool:
    """``phi_H(t)`` is a vertex of ``B_{L(H,E)}``: its tight normals have full rank."""
    U = _flat_operator(H, t)
    tight = [a for a in operator_ball(H) if dot(a, U) == ONE]
    return bool(tight) and rank(tight) == H.d * H.m


@dataclass(frozen=True)
class BoundaryConditions:
    point: str
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    cond5: bool | None
    operator_ball_extreme: bool | None
    cond3_witness: Vector | None
    cond4_witness: Vector | None

    @property
    def consistent(self) -> bool:
        base = self.cond1 == self.cond2 == self.cond3 == self.cond4
        return base and (self.cond5 is None or self.cond5 == self.cond1)


def boundary_conditions_report(H: FunctionSpace, t, with_operator_ball: bool = True) -> BoundaryConditions:
    if not H.target.polyhedral_kind:
        raise SmoothNormUnsupported("boundary_conditions_report")
    ti = H.index(t)
    cond1 = operator_extreme(H, ti)
    cond2 = ti in boundary_indices(H)
    w3 = next((x for x in probe_dual_points(H) if hs_extreme(H, ti, x)), None)
    verts = dual_vertices(H.target)
    ext4 = [v for v in verts if hs_extreme(H, ti, v)]
    cond5 = None
    if point_image(H, ti).dim == H.d:
        cond5 = len(ext4) == len(verts)
    obe = operator_ball_extreme(H, ti) if with_operator_ball else None
    return BoundaryConditions(
        H.points[ti], cond1, cond2, w3 is not None, bool(ext4), cond5, obe, w3, ext4[0] if ext4 else None
    )


def is_boundary_measure(H: FunctionSpace, mu) -> bool:
    """Whether ``mu`` is carried by the Choquet boundary.

    ``mu`` is either a length-n vector (scalar measure) or an n x d matrix
    (vector measure; its variation at ``s`` is the dual norm of row ``s``,
    which is nonzero exactly when the row is).
    """
    from .representation import ScalarMeasure, VectorMeasure

    if isinstance(mu, ScalarMeasure):
        rows = [(x,) for x in mu.values]
    elif isinstance(mu, VectorMeasure):
        if not H.target.polyhedral_kind:
            raise SmoothNormUnsupported("is_boundary_measure on vector measures")
        rows = mu.values
    else:
        rows = [tuple(r) if isinstance(r, (tuple, list)) else (r,) for r in mu]
        if rows and len(rows[0]) > 1 and not H.target.polyhedral_kind:
            raise SmoothNormUnsupported("is_boundary_measure on vector measures")
    ch = set(boundary_indices(H))
    return all(s in ch or not any(r) for s, r in enumerate(rows))
