"""GL_2(F_q) acting on ordered simplices of nonzero vectors in F_q^2.

Over an infinite field the bottom row of the orbit spectral sequence is
highly acyclic.  Over F_2 and F_3 we can build everything explicitly and see
what actually happens.  Verdicts are printed, not assumed.
"""

from homalg.stabilitylab import (gl_h1_non_example, min_weight_modular, orbit_row_complex,
                                 persistence_check, row_filtration_homology, vector_orbit_complex)

for q in (2, 3):
    cx = vector_orbit_complex(1, q, 1)
    orc = orbit_row_complex(1, q, 1)
    print(f"q={q}: simplices {[cx.rank(p) for p in range(2)]}, orbits {orc.orbit_counts()}, "
          f"orbit dims {orc.dims}")
    for k in (0, 1):
        r = row_filtration_homology(1, q, k, 2)
        hs = ", ".join(str(h) for h in r.homology)
        print(f"  F^{k} row homology: {hs}  (oracle agrees: {r.agrees}, k-acyclic: {r.k_acyclic})")
    pc = persistence_check(1, q)
    print(f"  d1 into column 0 is zero: {pc.d1_zero} ({pc.witnessed}/{pc.pairs} orbits witnessed)")

# the counting bound that feeds the prime-power argument
for p, m in ((2, 3), (3, 2), (5, 1)):
    w, ns = min_weight_modular(p, m, return_witness=True)
    print(f"p={p} m={m}: min weight {w} at {ns}, bound (p-1)m = {(p - 1) * m}")

# stabilization in degree one already fails over F_2
for name, ab in gl_h1_non_example().items():
    print(f"H_1({name}) = {ab}")
