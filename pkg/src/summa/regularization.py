"""Constant-shift regularization for zero-mean ("seismic-like") signals.

A zero constant term forces ``S_0 = 0`` and kills every harmonic mean.
Adding a constant ``beta`` to the signal, averaging the shifted partial sums
and subtracting ``beta`` again recovers the signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .means import rho_values, theta_values
from .series_core import (DEFAULT_QUADRATURE, FourierCoefficients, PeriodicSignal,
                          partial_sums)


@dataclass(frozen=True)
class ShiftConfig:
    beta: float
    n_max: int
    recovery_tolerance: float = 1e-3

    def __post_init__(self):
        if self.beta == 0 or not np.isfinite(self.beta):
            raise ConfigurationError("beta must be a nonzero finite constant")
        if self.n_max < 1:
            raise ConfigurationError(f"n_max must be >= 1, got {self.n_max}")
        if not self.recovery_tolerance > 0:
            raise ConfigurationError("recovery_tolerance must be positive")


@dataclass(frozen=True)
class RegularizedTrace:
    """Shifted-sum means on a grid; ``values[i]`` belongs to index ``start + i``.

    For ``rho`` the first-principles product is in ``values`` and the printed
    closed form in ``closed_form`` (compared via ``discrepancy``).
    """

    method: str
    beta: float
    x: np.ndarray
    values: np.ndarray
    shifted_sums: np.ndarray
    start: int = 0
    closed_form: Optional[np.ndarray] = None

    @property
    def discrepancy(self) -> Optional[np.ndarray]:
        if self.closed_form is None:
            return None
        return np.abs(self.values - self.closed_form)

    def final(self) -> np.ndarray:
        return self.values[-1]


def shift_signal(signal: PeriodicSignal, beta: float) -> PeriodicSignal:
    """``f + beta``; coefficients, if any, get ``a0 + 2 beta``."""
    if beta == 0 or not np.isfinite(beta):
        raise ConfigurationError("beta must be a nonzero finite constant")
    beta = float(beta)
    coeffs = None
    if signal.coeffs is not None:
        c = signal.coeffs
        coeffs = FourierCoefficients(c.a0 + 2 * beta, c.a, c.b)
    evaluator = None
    if signal.evaluator is not None:
        def evaluator(x, f=signal.evaluator, beta=beta):
            return np.asarray(f(x), dtype=float) + beta
    return PeriodicSignal(signal.L, coeffs, evaluator, f"{signal.name}+{beta:g}")


def default_beta(signal: PeriodicSignal, x) -> float:
    """Ten times the largest ``|f|`` on the grid (1 for the zero signal)."""
    peak = float(np.max(np.abs(signal(x)))) if signal.evaluator is not None else 0.0
    if peak == 0 and signal.coeffs is not None:
        c = signal.coeffs
        peak = abs(c.a0) / 2 + float(np.sum(np.abs(c.a)) + np.sum(np.abs(c.b)))
    return 10.0 * peak if peak > 0 else 1.0


def _shifted_sums(signal, beta, n_max, x, quad, route):
    shifted = shift_signal(signal, beta)
    if route is None:
        ok = shifted.coeffs is not None and shifted.kmax >= n_max
        route = "coeffs" if ok else "dirichlet"
    Z = partial_sums(shifted, n_max, np.asarray(x, dtype=float), route, quad)
    zero = Z == 0
    if np.any(zero):
        k = int(np.argmax(zero.reshape(Z.shape[0], -1).any(axis=1)))
        raise DomainError(f"shifted partial sum Z_{k} vanishes on the grid; "
                          f"try a larger |beta| than {beta:g}", index=k)
    return Z


def regularized_theta(signal: PeriodicSignal, beta: float, n_max: int, x,
                      quad=DEFAULT_QUADRATURE, route: Optional[str] = None
                      ) -> RegularizedTrace:
    """Harmonic means ``theta*_0..theta*_{n_max}`` of the shifted partial sums."""
    ShiftConfig(beta, n_max)
    x = np.asarray(x, dtype=float)
    Z = _shifted_sums(signal, beta, n_max, x, quad, route)
    return RegularizedTrace("theta", float(beta), x, theta_values(Z), Z)


def rho_closed_form(S, beta: float) -> np.ndarray:
    """``(n+1) beta prod_{k=1..n} (S_k + beta) / ((k+1) sigma_k + beta)``, ``n >= 1``.

    ``S`` are the unshifted partial sums and ``sigma_k`` their running means.
    """
    S = np.asarray(S, dtype=float)
    counts = np.arange(1, S.shape[0] + 1).reshape((-1,) + (1,) * (S.ndim - 1))
    sigma = np.cumsum(S, axis=0) / counts
    ratio = (S[1:] + beta) / (counts[1:] * sigma[1:] + beta)
    return counts[1:] * beta * np.cumprod(ratio, axis=0)


def regularized_rho(signal: PeriodicSignal, beta: float, n_max: int, x,
                    quad=DEFAULT_QUADRATURE, route: Optional[str] = None
                    ) -> RegularizedTrace:
    """Semi-harmonic means ``rho*_1..rho*_{n_max}`` of the shifted partial sums.

    Computed as ``Z_0 prod_{k=1..n} Z_k / sigma*_k`` with ``sigma*_k`` the
    running means of the shifted sums.
    """
    ShiftConfig(beta, n_max)
    x = np.asarray(x, dtype=float)
    Z = _shifted_sums(signal, beta, n_max, x, quad, route)
    running = np.cumsum(Z, axis=0)
    zero = running[1:] == 0
    if np.any(zero):
        k = int(np.argmax(zero.reshape(zero.shape[0], -1).any(axis=1))) + 1
        raise DomainError(f"shifted running mean sigma*_{k} vanishes", index=k, method="rho")
    closed = rho_closed_form(Z - beta, beta)
    return RegularizedTrace("rho", float(beta), x, rho_values(Z), Z, 1, closed)


def recover(trace, beta: Optional[float] = None) -> np.ndarray:
    """Trace values minus ``beta``; approximates the signal for large ``n``."""
    if isinstance(trace, RegularizedTrace):
        beta = trace.beta if beta is None else beta
        values = trace.values
    else:
        values = np.asarray(trace, dtype=float)
    if beta is None:
        raise ConfigurationError("beta is required to recover a bare array")
    return values - beta


def interior_mask(x, L: float, jumps=(0.0,), band: float = 0.05) -> np.ndarray:
    """Points at least ``band * L`` away from every jump (taken modulo ``2L``).

    ``band = 0.05`` excludes a band of total width 5% of the period around
    each jump.
    """
    x = np.asarray(x, dtype=float)
    keep = np.ones(x.shape, dtype=bool)
    for j in jumps:
        d = np.abs((x - j + L) % (2 * L) - L)
        keep &= d >= band * L
    return keep
