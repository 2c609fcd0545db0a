"""Built-in signals with closed-form Fourier coefficients.

``seismic-square`` is ``sign(x)`` (zero mean); ``offset-square`` lifts it by
``offset`` (default 2) so every partial sum stays positive.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .series_core import FourierCoefficients, PeriodicSignal

SIGNAL_NAMES = ("constant", "square", "seismic-square", "sawtooth", "triangle",
                "offset-square", "random-coeffs")
DEFAULT_KMAX = 64


def _odd(k):
    return (k % 2 == 1).astype(float)


def _sign(x):
    return np.sign(x)


def _pulse(x):
    return 0.5 * (1.0 + np.sign(x))


def _make(name, L, a0, a, b, evaluator):
    return PeriodicSignal(float(L), FourierCoefficients(a0, a, b), evaluator, name)


def catalog_signal(name: str, L: float = np.pi, kmax: int = DEFAULT_KMAX, **params
                   ) -> PeriodicSignal:
    """Named signal on ``[-L, L]`` with coefficients up to ``kmax``."""
    if kmax < 0:
        raise ConfigurationError(f"kmax must be >= 0, got {kmax}")
    k = np.arange(1, kmax + 1, dtype=float)
    zeros = np.zeros(kmax)
    if name == "constant":
        c = float(params.get("value", params.get("c", 1.0)))
        return _make(name, L, 2 * c, zeros, zeros,
                     lambda x, c=c: np.full(np.shape(x), c))
    if name == "square":
        return _make(name, L, 1.0, zeros, 2 * _odd(k) / (k * np.pi), _pulse)
    if name == "seismic-square":
        return _make(name, L, 0.0, zeros, 4 * _odd(k) / (k * np.pi), _sign)
    if name == "offset-square":
        off = float(params.get("offset", params.get("value", 2.0)))
        return _make(name, L, 2 * off, zeros, 4 * _odd(k) / (k * np.pi),
                     lambda x, off=off: np.sign(x) + off)
    if name == "sawtooth":
        def saw(x, L=float(L)):
            return np.where(np.abs(x) >= L, 0.0, x / L)
        return _make(name, L, 0.0, zeros, 2 * (-1.0) ** (k + 1) / (k * np.pi), saw)
    if name == "triangle":
        def tri(x, L=float(L)):
            return np.abs(x) / L
        return _make(name, L, 1.0, -4 * _odd(k) / (k * np.pi) ** 2, zeros, tri)
    if name == "random-coeffs":
        seed = int(params.get("seed", 0))
        K = int(params.get("K", 8))
        rng = np.random.default_rng(seed)
        scale = 1.0 / np.arange(1, K + 1)
        a = np.zeros(max(kmax, K))
        b = np.zeros(max(kmax, K))
        a0 = float(rng.normal())
        a[:K] = rng.normal(size=K) * scale
        b[:K] = rng.normal(size=K) * scale
        sig = PeriodicSignal.from_coefficients(FourierCoefficients(a0, a, b), L, name)
        return sig
    raise ConfigurationError(
        f"unknown signal {name!r}; valid names: {', '.join(SIGNAL_NAMES)}, coeffs:<list>"
    )


def parse_signal_spec(spec: str, L: float = np.pi, kmax: int = DEFAULT_KMAX) -> PeriodicSignal:
    """Parse ``name``, ``name:value``, ``name:key=v,key=v`` or ``coeffs:a0,a1,b1,...``."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name == "coeffs":
        try:
            flat = [float(v) for v in rest.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigurationError(f"bad coefficient list {rest!r}") from exc
        coeffs = FourierCoefficients.from_flat(flat)
        if coeffs.kmax < kmax:
            pad = np.zeros(kmax - coeffs.kmax)
            coeffs = FourierCoefficients(coeffs.a0, np.concatenate([coeffs.a, pad]),
                                         np.concatenate([coeffs.b, pad]))
        return PeriodicSignal.from_coefficients(coeffs, L, "coeffs")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                key, value = "value", key
            try:
                params[key.strip()] = float(value)
            except ValueError as exc:
                raise ConfigurationError(f"bad parameter {item!r} in {spec!r}") from exc
    return catalog_signal(name, L, kmax, **params)


SIGNAL_JUMPS = {
    "square": (0.0, np.pi),
    "seismic-square": (0.0, np.pi),
    "offset-square": (0.0, np.pi),
    "sawtooth": (np.pi,),
}


def jumps_of(signal: PeriodicSignal):
    """Jump locations of a catalog signal, scaled to its half period."""
    base = SIGNAL_JUMPS.get(signal.name.split("+")[0], ())
    return tuple(j / np.pi * signal.L for j in base)
