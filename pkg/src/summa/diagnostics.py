"""Contraction diagnostics, the harmonic summability certificate and axiom checks.

Norms follow one rule throughout: a 2-D trace ``(N+1, m)`` is normed row by
row with Simpson's rule on the supplied grid, a 1-D (number series) trace
uses absolute values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, UnsupportedMethodError
from .means import (METHODS, PartialSumSequence, compute_means, gamma_values,
                    number_series_partials, sigma_values, theta_values)
from .series_core import l2_norms

DEFAULT_DELTA = 1e-3
DEFAULT_CYCLIC_BAND = 1e-3
REL_SLACK = 1e-12

CONTRACTING, CYCLIC, VIOLATED = "contracting", "cyclic", "violated"


@dataclass(frozen=True)
class ContractionReport:
    """Verdicts of one smoothing operator over ``n``.

    ``onset_N`` is ``math.inf`` when no index qualifies.  ``ratio_trace[i]``
    belongs to index ``indices[i]``; secondary ratios live in ``aux``.
    """

    method: str
    onset_N: float
    delta: float
    indices: np.ndarray
    ratio_trace: np.ndarray
    verdicts: tuple
    aux: dict = field(default_factory=dict)
    closed_form_N: Optional[float] = None
    corner_case: Optional[str] = None

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.onset_N)


@dataclass(frozen=True)
class PythagoreanReport:
    passed: np.ndarray
    sigma: np.ndarray
    gamma: np.ndarray
    theta: np.ndarray

    @property
    def ok(self) -> bool:
        return bool(np.all(self.passed))


@dataclass(frozen=True)
class SummabilityCertificate:
    """Empirical ``K``/``M`` bounds and the admissible interval per index.

    ``window`` is the range of ``n`` the maxima were taken over.
    ``substituted`` lists indices where ``S_{n+1} = 0`` made the
    ``M``-expression undefined and ``(n+1)|theta_n - theta_{n+1}|`` was used.
    """

    K: float
    M: float
    window: tuple
    theta: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    m_terms: np.ndarray
    inside: np.ndarray
    substituted: tuple
    zero_convention_used: bool
    cauchy_bound: Optional[float]
    cauchy_args: Optional[tuple]
    verdict: str

    def tail_bound(self, n: int, r: int) -> float:
        return cauchy_tail_bound(self.m_terms, n, r, self.M)


def _norm_trace(values, grid):
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return np.abs(values)
    if grid is None:
        raise ConfigurationError("a grid is needed to norm grid-valued traces")
    return l2_norms(values, grid)


def pythagorean_check(S) -> PythagoreanReport:
    """Check ``theta_n <= gamma_n <= sigma_n`` for each ``n``."""
    vals = S.values if isinstance(S, PartialSumSequence) else np.asarray(S, dtype=float)
    if np.any(vals <= 0):
        n = int(np.argmax((vals <= 0).reshape(vals.shape[0], -1).any(axis=1)))
        raise DomainError(f"Pythagorean means need S_k > 0; S_{n} violates it", index=n)
    sig, gam, the = sigma_values(vals), gamma_values(vals), theta_values(vals)
    ok = (the <= gam * (1 + REL_SLACK)) & (gam <= sig * (1 + REL_SLACK))
    if ok.ndim > 1:
        ok = ok.reshape(ok.shape[0], -1).all(axis=1)
    return PythagoreanReport(ok, sig, gam, the)


def closed_form_onset(ratio: float) -> float:
    """Onset index from ``N = 1/(r - 1) - 1`` with ``r = ||S_{N+1}|| / ||S_N||``.

    ``r >= 2`` gives 0, ``r == 1`` gives ``inf``; ``r < 1`` has no
    nonnegative solution and returns ``nan``.
    """
    if ratio >= 2:
        return 0
    if ratio == 1:
        return math.inf
    if ratio < 1:
        return math.nan
    return max(0, math.ceil(1.0 / (ratio - 1.0) - 1.0))


def contraction_onset_sigma(norm_trace, delta: float = DEFAULT_DELTA,
                            band: float = DEFAULT_CYCLIC_BAND) -> ContractionReport:
    """Scan for the first ``n`` with ``| ||S_{n+1}||/(n+2) - ||S_n||/(n+1) | <= delta``.

    Beyond the onset the arithmetic smoothing contracts with factor
    ``(n+1)/(n+2)``; once that factor is within ``band`` of 1 the verdict
    becomes cyclic.
    """
    norms = np.asarray(norm_trace, dtype=float).reshape(-1)
    if norms.size < 2:
        raise DomainError("contraction scan needs at least two norms")
    if np.any(norms < 0) or not np.all(np.isfinite(norms)):
        raise DomainError("norm trace must be finite and nonnegative")
    if not delta > 0:
        raise ConfigurationError(f"delta must be > 0, got {delta}")
    n = np.arange(norms.size - 1)
    gaps = np.abs(norms[1:] / (n + 2) - norms[:-1] / (n + 1))
    hits = np.flatnonzero(gaps <= delta)
    onset = int(hits[0]) if hits.size else math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(norms[:-1] > 0, norms[1:] / norms[:-1], np.inf)
    at = onset if math.isfinite(onset) else n[-1]
    r = float(ratios[at])
    closed = closed_form_onset(r)
    corner = "ratio_ge_2" if r >= 2 else "ratio_eq_1" if r == 1 else None
    factor = (n + 1) / (n + 2)
    verdicts = tuple(
        VIOLATED if k < onset else CYCLIC if factor[k] >= 1 - band else CONTRACTING
        for k in n
    )
    return ContractionReport("sigma", onset, delta, n, ratios, verdicts,
                             {"gap": gaps, "factor": factor}, closed, corner)


def _verdict(ratio, band):
    if ratio > 1 + band:
        return CONTRACTING
    if ratio >= 1 - band:
        return CYCLIC
    return VIOLATED


def _safe_ratio(num, den, method, indices):
    zero = den == 0
    if np.any(zero):
        n = int(indices[np.argmax(zero)])
        raise DomainError(f"{method}: zero norm in the condition ratio at n={n}",
                          index=n, method=method)
    return num / den


def contraction_condition(method: str, S, grid=None, band: float = DEFAULT_CYCLIC_BAND,
                          zero_convention: bool = False) -> ContractionReport:
    """Sufficient contraction conditions of the nonlinear smoothing operators.

    gamma: ``||gamma_{n-1}|| / ||S_n||``; theta: ``||theta_{n-1}|| / ||S_n||``
    (with the side inequality reported in ``aux["side"]``); rho:
    ``||S_n|| / ||S_{n+1}||`` and ``||rho_{n-1}|| / ||rho_n||``, both needed.
    """
    seq = S if isinstance(S, PartialSumSequence) else PartialSumSequence(S)
    vals = seq.values
    if method not in ("gamma", "theta", "rho"):
        raise UnsupportedMethodError(f"no contraction condition for {method!r}")
    try:
        trace = compute_means(method, seq, zero_convention).values
    except DomainError as exc:
        raise DomainError(f"{method}: {exc}", index=exc.index, method=method) from exc
    s_norm = _norm_trace(vals, grid)
    z_norm = _norm_trace(trace, grid)
    N = seq.index_max
    aux = {}
    if method in ("gamma", "theta"):
        idx = np.arange(1, N + 1)
        ratio = _safe_ratio(z_norm[:-1], s_norm[1:], method, idx)
        if method == "theta" and N >= 2:
            # (n+1)||theta_n||/||S_{n+1}|| - (n+2)||theta_{n-1}||/||S_n|| <= 1
            k = idx[:-1]
            side = (k + 1) * ratio[1:] - (k + 2) * ratio[:-1]
            aux["side"] = side
            aux["side_ok"] = side <= 1
        verdicts = tuple(_verdict(r, band) for r in ratio)
    else:
        # rho_n lives at index n, stored at position n-1
        idx = np.arange(2, N)
        s_ratio = _safe_ratio(s_norm[2:N], s_norm[3:N + 1], method, idx)
        ratio = _safe_ratio(z_norm[:N - 2], z_norm[1:N - 1], method, idx)
        aux["s_ratio"] = s_ratio
        verdicts = []
        for a, b in zip(s_ratio, ratio):
            v = _verdict(b, band)
            if v == CONTRACTING and not a > 1 + band:
                v = CYCLIC if a >= 1 - band else VIOLATED
            verdicts.append(v)
        verdicts = tuple(verdicts)
    hits = [i for i, v in enumerate(verdicts) if v == CONTRACTING]
    onset = int(idx[hits[0]]) if hits else math.inf
    return ContractionReport(method, onset, band, idx, np.asarray(ratio), verdicts, aux)


def cauchy_tail_bound(m_terms, n: int, r: int, M: Optional[float] = None) -> float:
    """``r * M / (n + 1)`` with ``M`` the largest term over ``n..n+r-1``.

    Falls back to the supplied global ``M`` when the window ends early.
    """
    m_terms = np.asarray(m_terms, dtype=float)
    if n < 0 or r < 1:
        raise ConfigurationError("tail bound needs n >= 0 and r >= 1")
    if n + r <= m_terms.size:
        M = float(np.max(m_terms[n:n + r]))
    elif M is None:
        raise DomainError(f"window ends at {m_terms.size - 1}, need n + r - 1 = {n + r - 1}")
    return r * M / (n + 1)


def certify_theorem5(S, zero_convention: bool = False, n: Optional[int] = None,
                     r: Optional[int] = None, eps: Optional[float] = None
                     ) -> SummabilityCertificate:
    """Harmonic summability certificate over the available window.

    ``K = max |S_n|``; ``M = max_n |theta_n (theta_n / S_{n+1} - 1)|`` over
    ``n = 0..N-1``; the admissible interval is
    ``(S_{n+1} -+ sqrt(S_{n+1}^2 + 4 M |S_{n+1}|)) / 2``.  When ``n, r, eps``
    are given the verdict also requires ``cauchy_tail_bound <= eps``.
    """
    seq = S if isinstance(S, PartialSumSequence) else PartialSumSequence(S)
    vals = seq.values
    if vals.ndim != 1:
        raise ConfigurationError("certificates are computed one point at a time")
    if seq.index_max < 1:
        raise DomainError("a certificate needs at least S_0 and S_1")
    if np.any(np.abs(vals) > 1e300):
        raise DomainError("partial sums are not bounded")
    theta = theta_values(vals, zero_convention)
    th, nxt = theta[:-1], vals[1:]
    undefined = nxt == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        m_terms = np.abs(th * (th / np.where(undefined, 1.0, nxt) - 1))
    # exact increment the M-expression stands in for
    k = np.arange(th.size)
    m_terms = np.where(undefined, (k + 1) * np.abs(th - theta[1:]), m_terms)
    K = float(np.max(np.abs(vals)))
    M = float(np.max(m_terms))
    disc = np.sqrt(nxt * nxt + 4 * M * np.abs(nxt))
    lower, upper = 0.5 * (nxt - disc), 0.5 * (nxt + disc)
    slack = REL_SLACK * np.maximum(np.abs(lower), np.abs(upper))
    inside = (th >= lower - slack) & (th <= upper + slack)
    cauchy = None
    args = None
    if n is not None and r is not None:
        cauchy = cauchy_tail_bound(m_terms, n, r, M)
        args = (n, r, eps)
    if theta.size and np.any(~np.isfinite(theta)):
        verdict = "undefined_theta"
    elif not np.all(inside) or (eps is not None and cauchy is not None and cauchy > eps):
        verdict = "bounds_violated"
    else:
        verdict = "certified"
    used = bool(zero_convention and np.any(vals == 0))
    return SummabilityCertificate(
        K, M, (0, th.size - 1), th, lower, upper, m_terms, inside,
        tuple(int(i) for i in np.flatnonzero(undefined)), used, cauchy, args, verdict,
    )


def golden_ratio_selfcheck(K: float = 1.0) -> float:
    """Upper admissible bound with ``M = K`` and ``S == K``, divided by ``K``."""
    if not K > 0:
        raise ConfigurationError("K must be positive")
    upper = 0.5 * (math.sqrt(K * K + 4 * K * K) + K)
    ratio = upper / K
    assert ratio > 1
    return ratio


@dataclass(frozen=True)
class AxiomReport:
    """Empirical regularity, linearity and stability findings for one method.

    Each ``*_errors`` entry is an absolute deviation; ``holds`` maps each
    axiom to whether all deviations are within ``tol``.
    """

    method: str
    n: int
    tol: float
    limits: tuple
    regularity_errors: tuple
    additivity_errors: tuple
    homogeneity_errors: tuple
    stability_errors: tuple
    holds: dict


def method_limit(method: str, terms, n: int) -> float:
    """Value of the ``method`` mean at index ``n`` for a number series."""
    terms = np.asarray(terms, dtype=float)
    if terms.size < n + 1:
        raise ConfigurationError(f"need {n + 1} terms, got {terms.size}")
    trace = compute_means(method, number_series_partials(terms[:n + 1]))
    return float(trace.values[-1])


def axioms_check(method: str, corpus: Sequence, n: int = 10_000, tol: float = 1e-3,
                 scale: float = 3.0, drop_index: int = 1) -> AxiomReport:
    """Regularity, linearity and stability of ``method`` on convergent series.

    ``corpus`` holds ``(term_function, known_sum)`` pairs where
    ``term_function(k)`` returns the ``k``-th term for an integer array.
    Violations are returned, never raised.
    """
    if method not in METHODS:
        raise UnsupportedMethodError(f"unknown method {method!r}")
    k = np.arange(n + 1)
    series = [np.asarray(fn(k), dtype=float) for fn, _ in corpus]
    known = [float(s) for _, s in corpus]

    def lim(terms):
        try:
            return method_limit(method, terms, n)
        except DomainError:
            return math.nan

    limits = tuple(lim(t) for t in series)
    regular = tuple(abs(a - b) for a, b in zip(limits, known))
    additive = tuple(
        abs(lim(series[i] + series[j]) - (limits[i] + limits[j]))
        for i in range(len(series)) for j in range(i + 1, len(series))
    )
    homogeneous = tuple(abs(lim(scale * t) - scale * l) for t, l in zip(series, limits))
    stable = []
    for t, l in zip(series, limits):
        dropped = np.delete(t, drop_index)
        dropped = np.append(dropped, 0.0)
        stable.append(abs(lim(dropped) - (l - t[drop_index])))
    stable = tuple(stable)

    def within(errs):
        return bool(all(np.isfinite(e) and e <= tol for e in errs))

    holds = {
        "regularity": within(regular),
        "additivity": within(additive),
        "homogeneity": within(homogeneous),
        "stability": within(stable),
    }
    return AxiomReport(method, n, tol, limits, regular, additive, homogeneous, stable, holds)
