"""Pointwise recurrence dynamics of the harmonic and semi-harmonic sums.

At a fixed point ``x0`` the harmonic mean obeys a fraction-type recurrence
that reduces to a logistic map, and both sums admit first-order linear
(Kalman-like) surrogates.  The functions here build the exact traces and
measure how far each surrogate is from them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .series_core import DEFAULT_QUADRATURE, PeriodicSignal, partial_sums

KAPPA_WINDOW = (6, 16)
STABLE_REL_TOL = 0.05


@dataclass(frozen=True)
class TrajectoryTrace:
    """Index-aligned sequences at one point; unused stages stay ``None``.

    ``theta_tilde[n]`` and ``S[n]`` start at ``n = 0``; the ``rho_*`` arrays
    start at ``n = 1`` and per-step quantities (``factor``, ``u``-residuals,
    ``epsilon_model``) are ``nan`` where undefined.
    """

    x0: Optional[float]
    S: np.ndarray
    theta_tilde: Optional[np.ndarray] = None
    factor: Optional[np.ndarray] = None
    u: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None
    condition: Optional[np.ndarray] = None
    kappa: Optional[float] = None
    alpha: Optional[float] = None
    theta_model: Optional[np.ndarray] = None
    epsilon_model: Optional[np.ndarray] = None
    rho_tilde: Optional[np.ndarray] = None
    rho_model: Optional[np.ndarray] = None
    rho_epsilon: Optional[np.ndarray] = None
    rho_condition: Optional[np.ndarray] = None
    rho_deviation: Optional[np.ndarray] = None
    rho_model_valid: Optional[np.ndarray] = None

    @property
    def n_max(self) -> int:
        return self.S.size - 1


def _pointwise_sums(source, x0, n_max, quad, route):
    if isinstance(source, PeriodicSignal):
        if x0 is None:
            raise ConfigurationError("x0 is required for a signal source")
        if route is None:
            route = "coeffs" if source.coeffs is not None and source.kmax >= n_max else "dirichlet"
        return np.asarray(partial_sums(source, n_max, float(x0), route, quad), dtype=float)
    S = np.asarray(source, dtype=float).reshape(-1)
    if n_max is not None:
        if S.size < n_max + 1:
            raise ConfigurationError(f"need {n_max + 1} partial sums, got {S.size}")
        S = S[:n_max + 1]
    return S


def pointwise_theta_trace(source, x0=None, n_max=None, quad=DEFAULT_QUADRATURE,
                          route=None) -> TrajectoryTrace:
    """Harmonic mean at ``x0`` built by its fraction-type recurrence.

    ``source`` is a ``PeriodicSignal`` (sampled at ``x0``) or a sequence of
    partial sums.  ``factor[n]`` is ``(n+1) / (n (1 + theta_{n-1}/(n S_n)))``.
    """
    S = _pointwise_sums(source, x0, n_max, quad, route)
    if np.any(S == 0):
        n = int(np.argmax(S == 0))
        raise DomainError(f"pointwise harmonic recurrence needs S_n != 0; S_{n} = 0",
                          index=n, method="theta")
    theta = np.empty_like(S)
    factor = np.full_like(S, np.nan)
    theta[0] = S[0]
    for n in range(1, S.size):
        s, prev = S[n], theta[n - 1]
        den = prev / n + s
        if den == 0:
            raise DomainError(f"harmonic recurrence denominator vanishes at n={n}",
                              index=n, method="theta")
        theta[n] = (s / n + s) / den * prev
        factor[n] = (n + 1) / (n * (1 + prev / (n * s)))
    return TrajectoryTrace(None if x0 is None else float(x0), S, theta, factor)


def logistic_reduction(trace: TrajectoryTrace) -> TrajectoryTrace:
    """Map ``u_n = theta_n / ((n+1) S_n)`` and its distance from ``u(1-u)``.

    ``residuals[n] = |u_n - u_{n-1}(1 - u_{n-1})|`` and
    ``condition[n] = theta_{n-1} / (n S_n)`` for ``n >= 1``.
    """
    if trace.theta_tilde is None:
        raise ConfigurationError("logistic reduction needs a theta trace")
    S, th = trace.S, trace.theta_tilde
    n = np.arange(S.size)
    u = th / ((n + 1) * S)
    res = np.full_like(u, np.nan)
    cond = np.full_like(u, np.nan)
    res[1:] = np.abs(u[1:] - u[:-1] * (1 - u[:-1]))
    cond[1:] = th[:-1] / (n[1:] * S[1:])
    return replace(trace, u=u, residuals=res, condition=cond)


def condition_onset(condition) -> Optional[int]:
    """First ``N`` with ``condition[n] < 1`` for every ``n >= N`` (``None`` if never)."""
    c = np.asarray(condition, dtype=float)
    ok = np.isnan(c) | (c < 1)
    ok[0] = True
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    return int(bad[-1] + 1) if bad.size else 1


def estimate_kappa(trace: TrajectoryTrace) -> float:
    """Median of ``theta_{n-1} / S_n`` over ``n = 6..15``."""
    lo, hi = KAPPA_WINDOW
    th, S = trace.theta_tilde, trace.S
    hi = min(hi, S.size)
    if hi <= lo:
        raise DomainError(f"kappa estimation needs n up to {KAPPA_WINDOW[1] - 1}")
    n = np.arange(lo, hi)
    return float(np.median(th[n - 1] / S[n]))


def kalman_coefficient(n, kappa: float):
    """Linear-surrogate gain ``(n - alpha)/n - kappa/n^2`` with ``alpha = kappa - 1``."""
    n = np.asarray(n, dtype=float)
    return (n - (kappa - 1)) / n - kappa / (n * n)


def kalman_linearized_theta(trace: TrajectoryTrace, kappa: Optional[float] = None
                            ) -> TrajectoryTrace:
    """Compare the harmonic trace with its linear surrogate.

    ``epsilon_model[n] = theta_n - c_n theta_{n-1}`` uses the exact previous
    value (one-step model error); ``theta_model`` is the surrogate iterated
    on its own from ``theta_0``.
    """
    if trace.theta_tilde is None:
        raise ConfigurationError("linearization needs a theta trace")
    if kappa is None:
        kappa = estimate_kappa(trace)
    if not kappa > 1:
        raise DomainError(f"linearization needs kappa > 1 (alpha > 0), got {kappa}")
    th = trace.theta_tilde
    n = np.arange(1, th.size)
    coef = kalman_coefficient(n, kappa)
    eps = np.full_like(th, np.nan)
    eps[1:] = th[1:] - coef * th[:-1]
    model = np.empty_like(th)
    model[0] = th[0]
    for i, c in enumerate(coef, start=1):
        model[i] = c * model[i - 1]
    return replace(trace, kappa=float(kappa), alpha=float(kappa - 1),
                   theta_model=model, epsilon_model=eps)


def kalman_linearized_rho(source, x0=None, n_max=None, quad=DEFAULT_QUADRATURE,
                          route=None, tolerance: float = 0.1) -> TrajectoryTrace:
    """Exact semi-harmonic trace at ``x0`` and its ``(n^2-1)/n^2`` surrogate.

    ``rho_condition[n] = S_n / (n sigma_{n-1})`` and
    ``rho_deviation[n] = S_n / sigma_{n-1} - 1``; ``rho_model_valid`` marks
    indices with ``|rho_deviation| <= tolerance``.  All ``rho_*`` arrays are
    indexed from ``n = 1``.
    """
    S = _pointwise_sums(source, x0, n_max, quad, route)
    if S.size < 2:
        raise DomainError("semi-harmonic trace needs N >= 1", index=0, method="rho")
    sigma = np.cumsum(S) / np.arange(1, S.size + 1)
    if np.any(sigma == 0):
        n = int(np.argmax(sigma == 0))
        raise DomainError(f"running mean sigma_{n} vanishes", index=n, method="rho")
    N = S.size - 1
    rho = np.empty(N)
    rho[0] = (S[0] * S[1]) / sigma[1]
    for n in range(2, N + 1):
        rho[n - 1] = S[n] / sigma[n] * rho[n - 2]
    n = np.arange(1, N + 1)
    cond = S[1:] / (n * sigma[:-1])
    dev = S[1:] / sigma[:-1] - 1
    coef = (n * n - 1.0) / (n * n)
    eps = np.full(N, np.nan)
    eps[1:] = rho[1:] - coef[1:] * rho[:-1]
    model = np.empty(N)
    model[0] = rho[0]
    for i in range(1, N):
        model[i] = coef[i] * model[i - 1]
    return TrajectoryTrace(None if x0 is None else float(x0), S, rho_tilde=rho,
                           rho_model=model, rho_epsilon=eps, rho_condition=cond,
                           rho_deviation=dev, rho_model_valid=np.abs(dev) <= tolerance)


def trajectory_classify(trace: TrajectoryTrace, rel_tol: float = STABLE_REL_TOL) -> str:
    """Label the harmonic trajectory: ``tracks_Sn``, ``decaying_log`` or ``other``.

    Judged on the last quarter of the trace: ``tracks_Sn`` when
    ``theta_n / S_n`` stays within ``rel_tol`` of 1; ``decaying_log`` when
    ``theta_n ln(2n+1) / S_n`` has relative spread below ``rel_tol`` while
    ``theta_n / S_n`` keeps falling.
    """
    if trace.theta_tilde is None:
        raise ConfigurationError("classification needs a theta trace")
    th, S = trace.theta_tilde, trace.S
    if th.size < 20:
        raise DomainError(f"classification needs at least 20 terms, got {th.size}")
    tail = np.arange(th.size - th.size // 4, th.size)
    ratio = th[tail] / S[tail]
    if np.all(np.abs(ratio - 1) < rel_tol):
        return "tracks_Sn"
    q = ratio * np.log(2 * tail + 1)
    mean = np.mean(q)
    if mean > 0 and np.std(q) / mean < rel_tol and np.all(np.diff(ratio) < 0):
        return "decaying_log"
    return "other"
