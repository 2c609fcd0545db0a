"""Admissible intervals for the harmonic mean of convergent partial sums.

For S_n = 2 + 1/(n+1) the certificate takes empirical bounds K and M over
the window and checks that every theta_n lies in its interval.  The tail
bound r M / (n+1) shrinks as n grows.
"""

import numpy as np

from summa.diagnostics import certify_theorem5, golden_ratio_selfcheck

n = np.arange(301)
cert = certify_theorem5(2 + 1 / (n + 1))
print(f"K = {cert.K:.4f}, M = {cert.M:.4f}, verdict = {cert.verdict}")
for k in (0, 10, 100, 250):
    print(f"n={k:>3}: {cert.lower[k]:8.4f} <= theta = {cert.theta[k]:.4f} <= {cert.upper[k]:.4f}")
for k in (50, 100, 200):
    print(f"tail bound at n={k}, r=50: {cert.tail_bound(k, 50):.4f}")

print(f"with M = K and S == K the upper bound is {golden_ratio_selfcheck():.10f} K")
