"""Two-level systems in closed form, and what they say about resource
ratios for ground-energy estimation.

With only two distinct energies the dual stationarity condition solves
exactly: sweeping the budget between its non-trivial endpoints traces out
the ground-level weight p and energy E in closed form. Inverting gives
the smallest budget for any target weight, and the ratio between a
near-certain and a polynomially small target stays polynomially bounded.
"""

import numpy as np

from spectralab import TwoLevelSystem, advantage, cross_check_predictor, m_from_p, spectrum_from_mu

sys_ = TwoLevelSystem(xi1=0.0, xi2=1.0, a1=1.0, a2=3.0)
print("mu        m         p         E")
for mu in (0.05, 0.25, 0.5, 0.75, 0.95):
    s = spectrum_from_mu(sys_, mu)
    print(f"{mu:.2f}  {s.m:.6f}  {s.p:.6f}  {s.energy:.6f}")

s = spectrum_from_mu(sys_, 0.25)
print("\nround trip m_from_p(p) - m:", m_from_p(sys_, s.p) - s.m)
print("generic-solver residual:", cross_check_predictor(sys_, 0.25, 2, 2))

print("\nbudget ratios (p_target 0.01 -> 0.99):")
for a1, a2 in [(1.0, 1.0), (10.0, 1.0), (1.0, 10.0)]:
    sweep = TwoLevelSystem(xi1=0.0, xi2=1.0, a1=a1, a2=a2)
    lo = sweep.p_lower_limit
    pq = max(0.01, lo + 1e-6)
    rep = advantage(sweep, pq, 0.99)
    print(f"a1={a1:5.1f} a2={a2:5.1f}: m_Q={rep.m_q:.4f} m_C={rep.m_c:.4f} "
          f"ratio={rep.ratio:.3f} <= cap {rep.bound:.3f} ({rep.case})")
