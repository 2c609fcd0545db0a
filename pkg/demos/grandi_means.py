"""Four means of Grandi's series 1 - 1 + 1 - ...

The partial sums alternate 1, 0, 1, 0, ... .  The arithmetic mean settles
at 1/2, while a single zero partial sum pins the geometric and harmonic
means to 0 for good.
"""

import numpy as np

from summa.diagnostics import certify_theorem5
from summa.means import compute_means, number_series_partials

S = number_series_partials((-1.0) ** np.arange(101))
print("S_0..S_7:", S.values[:8])

for method, convention in [("sigma", False), ("gamma", True), ("theta", True), ("rho", False)]:
    tr = compute_means(method, S, zero_convention=convention)
    print(f"{method:>5}: first {tr.values[:4]}  last {tr.values[-1]:.6f}")

cert = certify_theorem5(S, zero_convention=True)
print(f"certificate bounds: K = {cert.K:g}, M = {cert.M:g}")
print(f"M-expression replaced at n = {cert.substituted[:5]} ... (S_(n+1) = 0 there)")
