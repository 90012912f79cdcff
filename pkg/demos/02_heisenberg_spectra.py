"""Heisenberg rings and tori: construction, magnetization sectors, and
entanglement across the spectrum.

Both models conserve total magnetization, so the full eigensystem is
assembled sector by sector. The bulk of the spectrum is strongly
entangled (stable rank near its ceiling); the edges are weakly entangled.
"""

import numpy as np

from spectralab import (
    Bipartition,
    build_afhm_1d,
    build_afhm_2d,
    eigenstate_stable_ranks,
    full_eigensystem,
    ground_state,
)

h = build_afhm_1d(8)
print("ring n=8:", len(h.terms), "terms")
es = full_eigensystem(h)
print("ground energy:", es.energies[0])
print("energy sum (= trace = 0):", round(float(es.energies.sum()), 12))

cut = Bipartition.left_half(8)
ranks = eigenstate_stable_ranks(es, cut)
offsets = es.energies - es.energies[0]
print("\nstable rank along the spectrum (half cut, ceiling 16):")
for lo, hi in [(0.0, 0.5), (2.0, 2.5), (4.0, 4.5), (6.5, 10.0)]:
    sel = (offsets >= lo) & (offsets < hi)
    if sel.any():
        print(f"  E-E1 in [{lo},{hi}): mean chi = {ranks[sel].mean():.3f} over {sel.sum()} states")

g2d = ground_state(build_afhm_2d(2))
print("\n2x2 torus ground energy:", g2d.energy, "(sector weight:", g2d.sector_weight, ")")
print("residual:", g2d.residual, " gap:", round(g2d.gap, 6))
