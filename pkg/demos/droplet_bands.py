"""Droplet states of the anisotropic ferromagnetic chain.

With n down spins on the periodic chain the lowest levels form a band of
bound droplets.  Finite chains are compared against the closed-form limit
of the droplet energy, and the band width is read off momentum sector by
momentum sector, because at larger L the band interleaves with two-magnon
scattering levels and naive level counting mislabels it.
"""

from spinsys import (XxzParams, compare_band_width, convergence_table,
                     droplet_energy_formula)

q = 0.5

for n in (1, 2):
    table = convergence_table(q, n, range(2 * n + 4, 15, 2))
    print(f"n = {n} droplet, q = {q}, formula E(n) = {table.formula_energy:.6f}")
    print("  L   periodic      open(SU_q)    |dev periodic|")
    for r in table.rows:
        print(f"  {r.L:2d}  {r.e_periodic:.8f}  {r.e_open_suq:.8f}  "
              f"{r.dev_periodic:.2e}")

print("\nband widths at L = 14")
for n in (1, 2):
    w = compare_band_width(XxzParams.from_q(14, q, boundary="periodic"), n)
    print(f"  n={n}: measured {w.measured:.6f}  printed {w.printed:.4f}  "
          f"printed/Delta {w.printed_over_delta:.4f}  -> closer to {w.closer}")

# the n = 1 width is exact: 2J/Delta = 4q/(1+q^2)
print("\nclosed-form one-magnon width:", 4 * q / (1 + q * q))
print("E(1) formula:", droplet_energy_formula(q, 1), " (equals J(1 - 1/Delta))")
