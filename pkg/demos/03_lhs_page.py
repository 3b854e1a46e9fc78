"""E^2 of the extension spectral sequence for Z/2 inside Z/4 and inside Z/2 x Z/2.

Both extensions have E^2 equal to F_2 in every cell.  For the split one the
diagonal sums match H_n(G; F_2) so everything survives.  For Z/4 the sums are
too large and some differential must be nonzero.
"""

from homalg import GF, cyclic, direct_product, trivial_module
from homalg.spectral import lhs_e2

cases = [("Z/4 > Z/2", cyclic(4), [0, 2]),
         ("Z/2 x Z/2 > Z/2", direct_product(cyclic(2), cyclic(2)), [0, 1])]

for name, G, H in cases:
    r = lhs_e2(G, H, trivial_module(G, GF(2)), 3, 3)
    print(name)
    print(r.grid())
    for n, (s, h, f) in enumerate(zip(r.sums, r.abutment, r.flags)):
        print(f"  n={n}: sum E^2 = {s}, dim H_n = {h}" + ("   <- forced differential" if f else ""))
    # rank of H_q(H) -> H_q(G); a zero marks where the column edge map has a kernel
    print("  column edge ranks:", r.column_edge_ranks)
    print()
