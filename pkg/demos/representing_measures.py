"""Walk through the five-point example with a two-dimensional sup-norm target.

Run with ``python3 demos/representing_measures.py``.
"""

from choquet_lab.boundary import choquet_boundary
from choquet_lab.corpus import fixture
from choquet_lab.exactgeom import fmt
from choquet_lab.orders import product_representation
from choquet_lab.representation import (
    representing_measures_at,
    representing_measures_scalar,
    vector_simplicial,
    weak_simplicial,
)

P = fixture("nezachovani").problem
H = P.space
print(f"points: {', '.join(H.points)};  target: {H.target.describe()};  dim H = {H.m}")
print("Choquet boundary:", ", ".join(choquet_boundary(H)))

t0 = H.index("0")
print("\nScalar measures representing evaluation at 0 (vertices):")
for sigma in representing_measures_scalar(H, t0).vertices:
    print("   ", sigma.describe(H.points))

rs = representing_measures_at(H, t0, (1, 1))
print(f"\nVector measures representing (1,1) o phi_H(0): norm {fmt(rs.norm)}, {len(rs.vertices)} vertices")
for mu in rs.vertices:
    print("   ", mu.describe(H.points))

for label in ("1", "-2"):
    rs = representing_measures_at(H, H.index(label), (2, -3))
    print(f"At the boundary point {label} the set is a singleton:", rs.vertices[0].describe(H.points))

print("\nweak simpliciality:  ", weak_simplicial(H).status.value)
print("vector simpliciality:", vector_simplicial(H, extras=P.extras).status.value)

rep = product_representation(H, H.functional_at(t0, (1, 1)))
print(f"\nMinimal product representation (mass {fmt(rep.mass)}):")
print("   ", rep.measure.describe(H.points))
