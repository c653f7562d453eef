"""
Random walks on Z_n
===================

Exact k-step distributions and how fast they approach uniform.
"""

from limdens.walk import (WalkSpec, decay_rate_estimate, k_step_distribution, max_deviation,
                          tv_distance_to_uniform)

spec = WalkSpec.parse(5, "0:1/2,1:1/4,-1:1/4")
for k in (0, 1, 2, 10, 50, 200):
    d = k_step_distribution(spec, k)
    print(f"k={k:3d} TV={float(tv_distance_to_uniform(d)):.3e} max dev={float(max_deviation(d)):.3e}")

# exponential decay, rescaled by n^2
for n in (3, 5, 7, 11):
    fit = decay_rate_estimate(WalkSpec.parse(n, "0:1/2,1:1/4,-1:1/4"), 300)
    print(f"n={n:2d} slope {fit.rate:.4f}  beta_hat {fit.beta_hat:.3f}  alpha_hat {fit.alpha_hat:.3f}")

# two steps of an S/S^-1 word move X by +-2 or 0
pairs = WalkSpec.parse(7, "2:1/4,-2:1/4,0:1/2")
print(k_step_distribution(pairs, 3).as_dict())
