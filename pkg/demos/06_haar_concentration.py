"""How loose is the triangle-inequality bound for random orthonormal bases?

Drawing the basis matrices from the Haar ensemble, the exact constraint
value A = ||sum alpha_i Gamma_i|| has a distribution independent of the
amplitudes, while the triangle bound B = sum |alpha_i| ||Gamma_i||
concentrates around ||alpha||_1 * E[A]. For flat amplitudes the gap is a
factor sqrt(k): the bound can be very loose, which is one reason
predicted tails sit below actual ones.
"""

import numpy as np

from spectralab import ab_statistics, norm_scaling_check

for d in (2, 4):
    k = d * d
    flat = np.full(k, 1.0 / np.sqrt(k))
    peaked = 0.5 ** np.arange(k)
    peaked /= np.linalg.norm(peaked)
    for name, alpha in (("flat", flat), ("peaked", peaked)):
        rep = ab_statistics(alpha, d, trials=3000, seed=11)
        print(f"d={d} {name:6s}: mean A={rep.mean_a:.4f} mean B={rep.mean_b:.4f} "
              f"||alpha||_1={rep.alpha_norm1:.3f} ratio={rep.ratio:.4f}")
        print("          tails:", [(round(t.r, 3), t.empirical, round(t.bound, 3)) for t in rep.tails])

print("\nsqrt(d)-scaling of ||G||/||G||_F across dimensions:")
scaling = norm_scaling_check((2, 4, 8), trials=2000, seed=12)
for d, (q25, q50, q75) in scaling.quantiles.items():
    print(f"  d={d}: sqrt(d)*ratio quartiles {q25:.3f} / {q50:.3f} / {q75:.3f}")
print("fitted constants:", scaling.fitted_lower, "-", scaling.fitted_upper)
