"""Recovering a zero-mean square wave through a constant shift.

sign(x) has S_0 = 0, so its harmonic mean is undefined.  Adding beta,
averaging harmonically and subtracting beta again recovers the signal away
from the jumps, and barely depends on beta.
"""

import numpy as np

from summa.catalog import catalog_signal, jumps_of
from summa.regularization import interior_mask, recover, regularized_rho, regularized_theta

n = 200
sig = catalog_signal("seismic-square", kmax=n)
x = np.linspace(-np.pi, np.pi, 1024)
f = sig(x)
mask = interior_mask(x, np.pi, jumps_of(sig))

rec = {b: recover(regularized_theta(sig, b, n, x))[-1] for b in (10.0, 20.0)}
for b, r in rec.items():
    print(f"beta={b:g}: max interior |theta* - beta - f| = {np.max(np.abs(r - f)[mask]):.3e}")
print(f"beta=10 vs beta=20 interior gap: {np.max(np.abs(rec[10.0] - rec[20.0])[mask]):.3e}")

rho = recover(regularized_rho(sig, 10.0, n, x))[-1]
print(f"rho* - beta vs theta* - beta interior gap: {np.max(np.abs(rho - rec[10.0])[mask]):.3e}")
