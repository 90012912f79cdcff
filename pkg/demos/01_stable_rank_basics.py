"""Stable rank and stable Schmidt rank on small, fully checkable states.

The stable rank ||A||_F^2 / ||A||^2 is a smooth stand-in for matrix rank:
equal to the rank for projector-like matrices, smaller whenever the
singular values are uneven, and never larger. Reshaping a pure state into
its coefficient matrix at a bipartition turns it into an entanglement
measure: 1 for products, 2 for a Bell pair, 2^(n/2) at most.
"""

import numpy as np

from spectralab import (
    Bipartition,
    entropy_profile,
    stable_rank,
    stable_schmidt_rank,
)

print("stable rank of identity_5:", stable_rank(np.eye(5)))
print("stable rank of diag(2,1,1):", stable_rank(np.diag([2.0, 1.0, 1.0])))
print("stable rank of a rank-1 outer product:", stable_rank(np.outer([1, 2], [3, 4])))

bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
cut = Bipartition(2, (0,))
print("\nBell pair, cut {0}|{1}:")
print("  chi =", stable_schmidt_rank(bell, cut))
prof = entropy_profile(bell, cut, alphas=(0.0, 1.0, 2.0))
print("  S_min =", prof.s_min, " S_alpha =", prof.s_alpha)

ghz = np.zeros(16)
ghz[0] = ghz[-1] = 1.0 / np.sqrt(2)
for a in [(0,), (0, 1), (0, 2)]:
    print(f"GHZ_4 chi at A={a}:", round(stable_schmidt_rank(ghz, Bipartition(4, a)), 12))

rng = np.random.default_rng(0)
haar = rng.standard_normal(16) + 1j * rng.standard_normal(16)
haar /= np.linalg.norm(haar)
print("\nrandom 4-qubit state, half cut:")
print("  chi =", stable_schmidt_rank(haar, Bipartition(4, (0, 1))))
print("  (bounded by min(2^|A|, 2^|B|) = 4)")
