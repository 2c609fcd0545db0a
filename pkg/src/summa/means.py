"""Arithmetic, geometric, harmonic and semi-harmonic means of partial sums.

Each mean has a direct (closed) form and a recursive smoothing-operator
form.  Arrays are processed along axis 0, so a trace can hold one point
(``(N+1,)``) or a whole grid (``(N+1, m)``) at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError, UnsupportedMethodError

METHODS = ("sigma", "gamma", "theta", "rho")
ORIGINS = ("fourier_point", "fourier_grid", "number_series")


@dataclass(frozen=True)
class PartialSumSequence:
    """Partial sums ``S_0..S_N``, one column per evaluation point."""

    values: np.ndarray
    origin: str = "number_series"
    x: Optional[object] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 0 or values.shape[0] == 0:
            raise ConfigurationError("a partial-sum sequence needs at least S_0")
        if not np.all(np.isfinite(values)):
            bad = int(np.argmax(~np.isfinite(values).reshape(values.shape[0], -1).all(axis=1)))
            raise DomainError(f"partial sum S_{bad} is not finite", index=bad)
        if self.origin not in ORIGINS:
            raise ConfigurationError(f"unknown origin {self.origin!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def index_max(self) -> int:
        return self.values.shape[0] - 1

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class MeanTrace:
    """A derived sequence of means; ``values[i]`` belongs to index ``start + i``."""

    method: str
    values: np.ndarray
    zero_convention_used: bool = False
    source: Optional[PartialSumSequence] = field(default=None, repr=False)
    order: int = 1

    @property
    def start(self) -> int:
        return 1 if self.method == "rho" else 0

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.start + self.values.shape[0])

    def at(self, n: int):
        if n < self.start or n >= self.start + self.values.shape[0]:
            raise DomainError(f"{self.method}_{n} is undefined for this trace",
                              index=n, method=self.method)
        return self.values[n - self.start]


def _as_sequence(S) -> PartialSumSequence:
    return S if isinstance(S, PartialSumSequence) else PartialSumSequence(S)


def _counts(values):
    shape = (values.shape[0],) + (1,) * (values.ndim - 1)
    return np.arange(1, values.shape[0] + 1, dtype=float).reshape(shape)


def _first_bad(mask) -> int:
    rows = mask.reshape(mask.shape[0], -1).any(axis=1)
    return int(np.argmax(rows))


def _zero_seen(S):
    return np.maximum.accumulate(S == 0, axis=0)


def sigma_values(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    return np.cumsum(S, axis=0) / _counts(S)


def gamma_values(S, zero_convention: bool = False) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    bad = S < 0 if zero_convention else S <= 0
    if np.any(bad):
        n = _first_bad(bad)
        raise DomainError(f"geometric mean needs S_k > 0; S_{n} violates it",
                          index=n, method="gamma")
    with np.errstate(divide="ignore"):
        logs = np.log(S)
    seen = _zero_seen(S)
    logs = np.where(seen, 0.0, logs)
    out = np.exp(np.cumsum(logs, axis=0) / _counts(S))
    out[0] = S[0]
    return np.where(seen, 0.0, out)


def theta_values(S, zero_convention: bool = False) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    seen = _zero_seen(S)
    if np.any(seen) and not zero_convention:
        n = _first_bad(S == 0)
        raise DomainError(f"harmonic mean needs S_k != 0; S_{n} = 0",
                          index=n, method="theta")
    safe = np.where(seen, 1.0, S)
    recip = np.cumsum(1.0 / safe, axis=0)
    vanishing = (recip == 0) & ~seen
    if np.any(vanishing):
        n = _first_bad(vanishing)
        raise DomainError(f"sum of reciprocals vanishes at n={n}", index=n, method="theta")
    out = _counts(S) / np.where(vanishing, 1.0, recip)
    if S.shape[0] > 1:
        # product form at n=1 keeps theta_1 bit-identical to rho_1
        pair = S[0] + S[1]
        ok = (pair != 0) & ~seen[1]
        out[1] = np.where(ok, 2 * (S[0] * S[1]) / np.where(ok, pair, 1.0), out[1])
    out[0] = safe[0]
    return np.where(seen, 0.0, out)


def rho_values(S) -> np.ndarray:
    """Semi-harmonic means ``rho_1..rho_N`` (there is no ``rho_0``)."""
    S = np.asarray(S, dtype=float)
    if S.shape[0] < 2:
        raise DomainError("semi-harmonic mean needs N >= 1", index=0, method="rho")
    running = np.cumsum(S, axis=0)
    zero = running[1:] == 0
    if np.any(zero):
        k = _first_bad(zero)
        raise DomainError(f"running sum S_0+...+S_{k + 1} vanishes (k={k})",
                          index=k + 1, method="rho")
    sig = running / _counts(S)
    factors = S[:-1] / sig[1:]
    out = np.cumprod(factors, axis=0) * S[1:]
    out[0] = (S[0] * S[1]) / sig[1]
    return out


def compute_means(method: str, S, zero_convention: bool = False) -> MeanTrace:
    """Direct mean trace of ``S`` for ``method`` in sigma/gamma/theta/rho.

    With ``zero_convention`` a zero partial sum is allowed in the geometric
    and harmonic means and pins them to 0 from that index on; the default
    strict mode raises ``DomainError`` instead.
    """
    seq = _as_sequence(S)
    vals = seq.values
    if method == "sigma":
        out = sigma_values(vals)
    elif method == "gamma":
        out = gamma_values(vals, zero_convention)
    elif method == "theta":
        out = theta_values(vals, zero_convention)
    elif method == "rho":
        out = rho_values(vals)
    else:
        raise UnsupportedMethodError(f"unknown method {method!r}; expected one of {METHODS}")
    used = bool(zero_convention and method in ("gamma", "theta") and np.any(vals == 0))
    return MeanTrace(method, out, used, seq)


def compute_means_recursive(method: str, S, zero_convention: bool = False) -> MeanTrace:
    """Same traces built step by step from the smoothing recurrences."""
    seq = _as_sequence(S)
    vals = seq.values
    N = seq.index_max
    if method == "sigma":
        out = np.empty_like(vals)
        out[0] = vals[0]
        for n in range(1, N + 1):
            p = 1.0 / (n + 1)
            out[n] = n * p * out[n - 1] + p * vals[n]
    elif method == "gamma":
        bad = vals < 0 if zero_convention else vals <= 0
        if np.any(bad):
            n = _first_bad(bad)
            raise DomainError(f"geometric mean needs S_k > 0; S_{n} violates it",
                              index=n, method="gamma")
        out = np.empty_like(vals)
        out[0] = vals[0]
        for n in range(1, N + 1):
            out[n] = vals[n] ** (1.0 / (n + 1)) * out[n - 1] ** (n / (n + 1.0))
    elif method == "theta":
        if not zero_convention and np.any(vals == 0):
            n = _first_bad(vals == 0)
            raise DomainError(f"harmonic mean needs S_k != 0; S_{n} = 0",
                              index=n, method="theta")
        out = np.empty_like(vals)
        out[0] = vals[0]
        for n in range(1, N + 1):
            s, prev = vals[n], out[n - 1]
            pinned = (s == 0) | (prev == 0)
            den = prev / n + s
            if np.any((den == 0) & ~pinned):
                raise DomainError(f"harmonic recurrence denominator vanishes at n={n}",
                                  index=n, method="theta")
            den = np.where(pinned | (den == 0), 1.0, den)
            out[n] = np.where(pinned, 0.0, (s / n + s) / den * prev)
    elif method == "rho":
        if N < 1:
            raise DomainError("semi-harmonic mean needs N >= 1", index=0, method="rho")
        running = np.cumsum(vals, axis=0)
        if np.any(running[1:] == 0):
            k = _first_bad(running[1:] == 0)
            raise DomainError(f"running sum vanishes at n={k + 1}", index=k + 1, method="rho")
        out = np.empty_like(vals[1:])
        out[0] = (vals[0] * vals[1]) / (running[1] / 2)
        for n in range(2, N + 1):
            out[n - 1] = ((n + 1) * vals[n] / running[n]) * out[n - 2]
    else:
        raise UnsupportedMethodError(f"unknown method {method!r}; expected one of {METHODS}")
    used = bool(zero_convention and method in ("gamma", "theta") and np.any(vals == 0))
    return MeanTrace(method, out, used, seq)


def smoothed_weights(n: int) -> np.ndarray:
    """Fejér weights ``1 - k/(n+1)`` for ``k = 1..n``."""
    if n < 1:
        raise DomainError(f"smoothed weights need n >= 1, got {n}", index=n)
    k = np.arange(1, n + 1)
    return 1.0 - k / (n + 1.0)


def weighted_smoothed_sum(term_means, n: Optional[int] = None) -> float:
    """``phi_0 + sum_k w_n(k) phi_k`` over averaged series terms ``phi_0..phi_n``."""
    phi = np.asarray(term_means, dtype=float)
    if n is None:
        n = phi.size - 1
    if phi.size != n + 1:
        raise ConfigurationError(f"expected {n + 1} term means, got {phi.size}")
    if n == 0:
        return float(phi[0])
    return float(phi[0] + smoothed_weights(n) @ phi[1:])


def iterate_mean(trace: MeanTrace) -> MeanTrace:
    """Arithmetic means of an arithmetic-mean trace (one order higher)."""
    if trace.method != "sigma":
        raise UnsupportedMethodError(
            f"iterated means are defined for sigma traces, not {trace.method!r}"
        )
    return MeanTrace("sigma", sigma_values(trace.values), trace.zero_convention_used,
                     trace.source, trace.order + 1)


def number_series_partials(terms) -> PartialSumSequence:
    terms = np.asarray(terms, dtype=float)
    return PartialSumSequence(np.cumsum(terms, axis=0), "number_series")
