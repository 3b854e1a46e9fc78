"""Integral homology of small groups from the bar resolution.

Run:  python demos/01_group_homology.py
"""

from homalg import (FinAbGroup, GF, cyclic, dihedral, group_cohomology, group_homology,
                    quaternion, symmetric, trivial_module)
from homalg.groupcore import abelianization

# H_n(Z/n; Z) alternates between Z/n and 0
for n in (2, 3, 6):
    res = group_homology(cyclic(n), N=4)
    print(f"H_*(Z/{n}) =", ", ".join(str(h) for h in res.degrees))

# H_1 is always the abelianization
for G in (symmetric(3), dihedral(4), quaternion()):
    h1 = group_homology(G, N=1).degrees[1]
    print(f"{G.name:>10}: H_1 = {h1}, G/[G,G] = {abelianization(G)}")
    assert h1 == abelianization(G)

# field coefficients only see the dimension
V = cyclic(2)
print("H_*(Z/2; F_2) dims:", group_homology(V, trivial_module(V, GF(2)), 4).degrees)

# cohomology in degree two of Z/2 classifies the two extensions of order 4
h2 = group_cohomology(V, trivial_module(V, GF(2)), 2).degrees[2]
print("dim H^2(Z/2; F_2) =", h2)

print(FinAbGroup.from_cyclic_orders([4, 6]), "is how Z/4 + Z/6 prints after normalizing")
