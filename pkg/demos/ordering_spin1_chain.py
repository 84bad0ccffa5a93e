"""Ferromagnetic ordering of energy levels on a short spin-1 chain.

E(H, S) denotes the lowest energy among total-spin-S states.  For the
ferromagnetic chain the claim is strict decrease of E(H, S) in S, so the
ground state is maximally polarized and the gap is E(H, S_max - 1) - E(H, S_max).
The spin labels come from the SU(2) Casimir evaluated in each magnetization
sector, not from counting alone.
"""

from spinsys import (SpinSpace, assemble, classify_total_spin, foel_check,
                     heisenberg, lieb_mattis_check, path_graph,
                     spin_multiplicities, star_graph, su2_casimir_value,
                     su2_totals)

g = path_graph(5, spin=1.0)
space = SpinSpace.from_graph(g)
H = assemble(heisenberg(g), space)

mult = spin_multiplicities(space)
cvals = {t: su2_casimir_value(t) for t in mult}
levels = classify_total_spin(H, su2_totals(space).casimir, cvals, space)

print("spin-1 chain, L = 5, ferromagnetic J = 1")
print(" 2S   multiplets   E(H,S)        top level")
for t in levels.spins():
    print(f" {t:2d}   {levels.counts[t]:4d}        {levels.entries[t]:+.6f}    "
          f"{levels.max_entries[t]:+.6f}")

verdict = foel_check(levels)
print("ordered:", verdict.holds, " smallest margin:", verdict.margin)
gap = levels.entries[8] - levels.entries[10]
print("gap E(H,4) - E(H,5):", gap)

# the antiferromagnetic counterpart on a star: ground spin |S_A - S_B|
star = star_graph(3)
lm = lieb_mattis_check(star, [0], [1, 2, 3])
print("bipartite ordering on the 3-leaf star:", lm.holds, " margin:", lm.margin)
