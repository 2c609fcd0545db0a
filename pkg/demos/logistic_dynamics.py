"""Pointwise dynamics of the harmonic mean.

u_n = theta_n / ((n+1) S_n) follows the logistic map u -> u(1-u) up to a
residual that vanishes for flat partial sums.  Two extreme trajectories
are then classified: flat sums (theta tracks S) and flat terms (theta
falls behind S like 1/ln n).
"""

import numpy as np

from summa.catalog import catalog_signal
from summa.dynamics import (kalman_linearized_rho, logistic_reduction, pointwise_theta_trace,
                            trajectory_classify)

flat = logistic_reduction(pointwise_theta_trace(np.ones(200)))
print("logistic residual at n = 10, 50, 199:", flat.residuals[[10, 50, 199]])
print("flat sums  ->", trajectory_classify(flat))

terms = pointwise_theta_trace(np.arange(1.0, 10002.0))
th = terms.theta_tilde
print("flat terms ->", trajectory_classify(terms))
print(f"theta_10000 = {th[10000]:.2f}, theta_10000 / S_10000 = {th[10000] / terms.S[10000]:.4f}")

sig = catalog_signal("offset-square", kmax=120)
rho = kalman_linearized_rho(sig, x0=np.pi / 2, n_max=120)
valid = rho.rho_model_valid
print(f"rho surrogate valid at {valid.sum()} of {valid.size} indices; "
      f"max one-step error {np.nanmax(np.abs(rho.rho_epsilon)):.3e}")
