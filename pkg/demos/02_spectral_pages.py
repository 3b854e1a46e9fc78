"""Pages of the spectral sequence of a filtered complex over F_p.

A generator y of filtration 2 whose boundary x sits in filtration 0 survives
to E^2 and is killed by d^2.  The basis is scrambled by a random
filtration-preserving change of coordinates first, so nothing is read off
the input directly.
"""

from homalg.spectral import edge_maps, filtered_from_pieces, spectral_sequence

fc = filtered_from_pieces([("cycle", 0, 0), ("cycle", 1, 0), ("pair", 1, 2, 0)], p=3, top=2, seed=1)
ss = spectral_sequence(fc)

for page in ss.pages[:4]:
    print(f"E^{page.r}")
    print(page.grid())
    print()

print("E^inf total dims:", [ss.einf.total(n) for n in range(fc.max_degree + 1)])
print("H_n of the complex:", ss.abutment_dims())
print("converged:", ss.convergence_audit())

em = edge_maps(ss)
print("pi_q surjective:", em.surjective)
print("iota_p injective:", em.injective)
