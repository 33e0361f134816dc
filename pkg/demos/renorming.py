"""The same function space under two norms on the target.

With an octagonal norm the functional (1,1) o phi_H(0) has two different
boundary representing measures; under a strictly convex l_p norm every
certified representing set at the default probes is a single measure.

Run with ``python3 demos/renorming.py``.
"""

from fractions import Fraction

from choquet_lab.boundary import boundary_indices
from choquet_lab.corpus import fixture
from choquet_lab.exactgeom import fmt
from choquet_lab.normed_space import NormSpec, Side, norm_value
from choquet_lab.representation import default_probes, representing_measures_at, vector_simplicial

P = fixture("renorm2").problem
H = P.space
t0 = H.index("0")
print("target:", H.target.describe())
print("dual norm of (1,1):", fmt(norm_value(H.target, (1, 1), Side.DUAL)))
rs = representing_measures_at(H, t0, (1, 1))
ch = boundary_indices(H)
print(f"boundary representing measures of (1,1) o phi_H(0), norm {fmt(rs.norm)}:")
for mu in rs.boundary_part(ch):
    print(f"    {mu.describe(H.points)}   mass {fmt(mu.total_variation(H.target))}")
v = vector_simplicial(H, extras=P.extras)
print("vector simpliciality:", v.status.value)

for p in (Fraction(2), Fraction(3)):
    L = H.with_target(NormSpec.lp(2, p))
    v = vector_simplicial(L)
    sizes = []
    for probe in default_probes(L):
        r = representing_measures_at(L, probe.point, probe.x_star)
        sizes.append(len(r.boundary_part(boundary_indices(L))))
    print(f"\nunder l_{fmt(p)}: status {v.status.value}; boundary parts per probe: {sorted(set(sizes))}; "
          f"{len(v.undecided)} probes only partially certified")
