"""Gibbs overshoot of plain partial sums against Fejér (Cesàro) smoothing.

The square wave sign(x) jumps at 0.  Partial sums overshoot by about 9% of
the jump next to it; their running mean does not overshoot and passes
through the midpoint 0.
"""

import numpy as np

from summa.catalog import catalog_signal
from summa.means import compute_means
from summa.series_core import cesaro_via_fejer, partial_sums

n = 50
sig = catalog_signal("seismic-square", kmax=n)
x = np.linspace(1e-4, 0.6, 3000)
S = partial_sums(sig, n, x)
sigma = compute_means("sigma", S).values

print(f"max S_{n} just right of the jump:     {S[-1].max():.4f}")
print(f"max sigma_{n} just right of the jump: {sigma[-1].max():.4f}")
print(f"sigma_{n}(0) via the Fejér kernel:    {float(cesaro_via_fejer(sig, n, 0.0)):.2e}")
