"""When does arithmetic smoothing start to contract?

Scan the norms of the partial sums of an offset square wave for the first
index where successive normalized norms differ by at most delta, and set
the scan against the closed-form onset estimate.  The wave has only odd
harmonics, so S_2k = S_(2k-1) and a norm ratio of exactly 1 (closed form
N = inf) is common.
"""

import numpy as np

from summa.catalog import catalog_signal
from summa.diagnostics import contraction_condition, contraction_onset_sigma
from summa.series_core import default_grid, l2_norms, partial_sums

sig = catalog_signal("offset-square", kmax=80)
x = default_grid(np.pi, 512)
S = partial_sums(sig, 80, x)

for delta in (1e-2, 1e-3, 1e-4):
    rep = contraction_onset_sigma(l2_norms(S, x), delta)
    print(f"delta={delta:g}: scan onset N = {rep.onset_N}, closed form N = {rep.closed_form_N}")

for method in ("gamma", "theta", "rho"):
    rep = contraction_condition(method, S, x)
    counts = {v: rep.verdicts.count(v) for v in sorted(set(rep.verdicts))}
    print(f"{method:>5}: {counts}")

print("corner cases:",
      contraction_onset_sigma(2.0 ** np.arange(10)).closed_form_N,
      contraction_onset_sigma(np.ones(10), delta=1e-6).closed_form_N)
