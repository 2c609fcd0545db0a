"""Periodic signals, Fourier coefficients, partial sums and the two kernels.

Every integral over one period is written in the shifted variable
``u = x + tau`` so the quadrature panels stay fixed on ``[-L, L]``.  Catalog
signals put their jumps at ``0`` and ``+-L``, which are panel edges for an
even panel count, so Gauss-Legendre keeps its accuracy on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from .errors import ConfigurationError, EvaluationError

# |sin(pi x / 2L)| below this switches a kernel to its limit value
KERNEL_SINGULAR_EPS = 1e-12
DEFAULT_GRID_POINTS = 1024


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre rule on ``[-L, L]``."""

    panels: int = 64
    points_per_panel: int = 8
    abs_tol: float = 1e-8

    def __post_init__(self):
        if self.panels < 1:
            raise ConfigurationError(f"panels must be >= 1, got {self.panels}")
        if self.points_per_panel < 2:
            raise ConfigurationError(
                f"points_per_panel must be >= 2, got {self.points_per_panel}"
            )
        if not self.abs_tol > 0:
            raise ConfigurationError(f"abs_tol must be > 0, got {self.abs_tol}")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=32)
def _nodes(L: float, panels: int, points: int):
    t, w = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(-L, L, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    u.setflags(write=False)
    wu.setflags(write=False)
    return u, wu


def quadrature_nodes(L: float, quad: QuadratureConfig = DEFAULT_QUADRATURE):
    """Nodes and weights of the composite rule over one period ``[-L, L]``."""
    return _nodes(float(L), quad.panels, quad.points_per_panel)


@dataclass(frozen=True)
class FourierCoefficients:
    """``a0`` plus ``a[k-1], b[k-1]`` for harmonics ``k = 1..kmax``."""

    a0: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(-1)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if a.shape != b.shape:
            raise ConfigurationError("cosine and sine coefficient lists differ in length")
        if not (np.isfinite(self.a0) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ConfigurationError("Fourier coefficients must be finite")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def kmax(self) -> int:
        return self.a.size

    @classmethod
    def from_flat(cls, values):
        """Build from ``[a0, a1, b1, a2, b2, ...]``."""
        values = [float(v) for v in values]
        if not values:
            raise ConfigurationError("coefficient list is empty")
        rest = values[1:]
        if len(rest) % 2:
            rest.append(0.0)
        return cls(values[0], np.array(rest[0::2]), np.array(rest[1::2]))

    def truncated(self, kmax: int) -> "FourierCoefficients":
        return FourierCoefficients(self.a0, self.a[:kmax], self.b[:kmax])


@dataclass(frozen=True)
class PeriodicSignal:
    """A ``2L``-periodic signal given by coefficients, an evaluator, or both.

    The evaluator is only ever called with arguments in ``[-L, L)``.
    """

    half_period: float
    coeffs: Optional[FourierCoefficients] = None
    evaluator: Optional[Callable] = None
    name: str = "signal"

    def __post_init__(self):
        if not (np.isfinite(self.half_period) and self.half_period > 0):
            raise ConfigurationError(f"half period L must be > 0, got {self.half_period}")
        if self.coeffs is None and self.evaluator is None:
            raise ConfigurationError("a signal needs coefficients or an evaluator")

    @property
    def L(self) -> float:
        return float(self.half_period)

    @property
    def kmax(self) -> Optional[int]:
        return None if self.coeffs is None else self.coeffs.kmax

    def wrap(self, x):
        L = self.L
        x = np.asarray(x, dtype=float)
        return x - 2 * L * np.floor((x + L) / (2 * L))

    def __call__(self, x):
        if self.evaluator is None:
            raise ConfigurationError(f"signal {self.name!r} has no evaluator")
        xw = self.wrap(x)
        return np.asarray(self.evaluator(xw), dtype=float) * np.ones_like(xw)

    @classmethod
    def from_coefficients(cls, coeffs: FourierCoefficients, L: float = np.pi, name="coeffs"):
        """Band-limited signal whose evaluator sums the full coefficient list."""

        def evaluate(x, c=coeffs, L=float(L)):
            return series_value(c, L, x)

        return cls(float(L), coeffs, evaluate, name)

    def check_consistency(self, quad: QuadratureConfig = DEFAULT_QUADRATURE,
                          tol: Optional[float] = None) -> float:
        """Largest gap between stored coefficients and those of the evaluator.

        Raises ``ConfigurationError`` when the gap exceeds ``tol``
        (``quad.abs_tol`` by default).
        """
        if self.coeffs is None or self.evaluator is None:
            return 0.0
        got = fourier_coefficients(self, self.coeffs.kmax, quad)
        gap = max(
            abs(got.a0 - self.coeffs.a0),
            float(np.max(np.abs(got.a - self.coeffs.a), initial=0.0)),
            float(np.max(np.abs(got.b - self.coeffs.b), initial=0.0)),
        )
        tol = quad.abs_tol if tol is None else tol
        if gap > tol:
            raise ConfigurationError(
                f"coefficients of {self.name!r} disagree with its evaluator by {gap:.3g}"
            )
        return gap


def series_value(coeffs: FourierCoefficients, L: float, x):
    """Evaluate the trigonometric sum of ``coeffs`` at ``x``."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, coeffs.kmax + 1)
    arg = np.multiply.outer(x, k) * (np.pi / L)
    return coeffs.a0 / 2 + np.cos(arg) @ coeffs.a + np.sin(arg) @ coeffs.b


@dataclass(frozen=True)
class GridFunction:
    """Samples on a strictly increasing grid spanning ``[-L, L]``."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or values.shape[-1:] != grid.shape:
            raise ConfigurationError("grid and values lengths differ")
        if grid.size < 3:
            raise ConfigurationError("a grid function needs at least 3 points")
        if np.any(np.diff(grid) <= 0):
            raise ConfigurationError("grid must be strictly increasing")
        if not np.isclose(grid[0], -grid[-1], rtol=0, atol=1e-12 * abs(grid[-1])):
            raise ConfigurationError("grid must span [-L, L] including both endpoints")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def L(self) -> float:
        return float(self.grid[-1])

    def __mul__(self, c):
        return GridFunction(self.grid, self.values * c)

    __rmul__ = __mul__


def default_grid(L: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    return np.linspace(-L, L, points)


def _sample_at_nodes(signal: PeriodicSignal, quad: QuadratureConfig):
    if signal.evaluator is None:
        raise ConfigurationError(f"signal {signal.name!r} has no evaluator")
    u, w = quadrature_nodes(signal.L, quad)
    fu = signal(u)
    bad = ~np.isfinite(fu)
    if np.any(bad):
        node = float(u[np.argmax(bad)])
        raise EvaluationError(f"evaluator returned {fu[bad][0]} at node u={node!r}", node=node)
    return u, w, fu


def fourier_coefficients(signal: PeriodicSignal, kmax: int,
                         quad: QuadratureConfig = DEFAULT_QUADRATURE) -> FourierCoefficients:
    """Euler-formula coefficients of ``signal`` by composite quadrature."""
    if kmax < 0:
        raise ConfigurationError(f"kmax must be >= 0, got {kmax}")
    u, w, fu = _sample_at_nodes(signal, quad)
    L = signal.L
    k = np.arange(1, kmax + 1)
    arg = np.multiply.outer(k, u) * (np.pi / L)
    wf = w * fu
    return FourierCoefficients(
        float(np.sum(wf)) / L, np.cos(arg) @ wf / L, np.sin(arg) @ wf / L
    )


def _kernel_sine(x, L):
    t = 0.5 * np.pi * np.asarray(x, dtype=float) / L
    s = np.sin(t)
    small = np.abs(s) < KERNEL_SINGULAR_EPS
    return t, s, small


def dirichlet_kernel(n: int, x, L: float = np.pi):
    """``sin((n + 1/2) pi x / L) / sin(pi x / 2L)``, equal to ``2n + 1`` at the poles."""
    if n < 0:
        raise ConfigurationError(f"kernel order must be >= 0, got {n}")
    t, s, small = _kernel_sine(x, L)
    out = np.where(small, 2.0 * n + 1.0, np.sin((2 * n + 1) * t) / np.where(small, 1.0, s))
    return float(out) if out.ndim == 0 else out


def fejer_kernel(n: int, x, L: float = np.pi):
    """Nonnegative Fejér kernel, equal to ``n + 1`` at the poles."""
    if n < 0:
        raise ConfigurationError(f"kernel order must be >= 0, got {n}")
    t, s, small = _kernel_sine(x, L)
    ratio = np.sin((n + 1) * t) / np.where(small, 1.0, s)
    out = np.where(small, n + 1.0, ratio * ratio / (n + 1))
    return float(out) if out.ndim == 0 else out


def _as_points(x):
    x = np.asarray(x, dtype=float)
    return x.reshape(-1), x.shape


def partial_sums(signal: PeriodicSignal, n_max: int, x, route: str = "coeffs",
                 quad: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Partial sums ``S_0..S_{n_max}`` at ``x``; shape ``(n_max + 1,) + x.shape``.

    ``route="coeffs"`` sums the stored coefficients, ``route="dirichlet"``
    convolves the evaluator with the Dirichlet kernel.
    """
    if n_max < 0:
        raise ConfigurationError(f"n_max must be >= 0, got {n_max}")
    pts, shape = _as_points(x)
    L = signal.L
    if route == "coeffs":
        c = signal.coeffs
        if c is None:
            raise ConfigurationError(f"signal {signal.name!r} has no coefficients")
        if c.kmax < n_max:
            raise ConfigurationError(
                f"signal {signal.name!r} has kmax={c.kmax} < n={n_max}"
            )
        k = np.arange(1, n_max + 1)
        arg = np.multiply.outer(k, pts) * (np.pi / L)
        terms = c.a[:n_max, None] * np.cos(arg) + c.b[:n_max, None] * np.sin(arg)
        out = np.empty((n_max + 1, pts.size))
        out[0] = c.a0 / 2
        out[1:] = c.a0 / 2 + np.cumsum(terms, axis=0)
    elif route == "dirichlet":
        u, w, fu = _sample_at_nodes(signal, quad)
        tau = u[:, None] - pts[None, :]
        wf = (w * fu / (2 * L))[:, None]
        out = np.array([np.sum(dirichlet_kernel(n, tau, L) * wf, axis=0)
                        for n in range(n_max + 1)])
    else:
        raise ConfigurationError(f"unknown partial-sum route {route!r}")
    return out.reshape((n_max + 1,) + shape)


def partial_sum(signal: PeriodicSignal, n: int, x, route: str = "coeffs",
                quad: QuadratureConfig = DEFAULT_QUADRATURE):
    """Single partial sum ``S_n(x)``."""
    if n < 0:
        raise ConfigurationError(f"n must be >= 0, got {n}")
    pts, shape = _as_points(x)
    if route == "dirichlet":
        u, w, fu = _sample_at_nodes(signal, quad)
        L = signal.L
        val = (w * fu) @ dirichlet_kernel(n, u[:, None] - pts[None, :], L) / (2 * L)
    else:
        val = partial_sums(signal, n, pts, route, quad)[n]
    val = val.reshape(shape)
    return float(val) if val.ndim == 0 else val


def cesaro_via_fejer(signal: PeriodicSignal, n: int, x,
                     quad: QuadratureConfig = DEFAULT_QUADRATURE):
    """Cesàro-Fejér mean ``sigma_n(x)`` as a convolution with the Fejér kernel."""
    if n < 0:
        raise ConfigurationError(f"n must be >= 0, got {n}")
    pts, shape = _as_points(x)
    u, w, fu = _sample_at_nodes(signal, quad)
    L = signal.L
    val = (w * fu) @ fejer_kernel(n, u[:, None] - pts[None, :], L) / (2 * L)
    val = val.reshape(shape)
    return float(val) if val.ndim == 0 else val


def l2_norm(gf: GridFunction) -> float:
    """L2 norm over ``[-L, L]`` by composite Simpson on the grid."""
    if gf.grid.size < 3:
        raise ConfigurationError("l2_norm needs at least 3 grid points")
    return float(l2_norms(gf.values, gf.grid))


def l2_norms(values, grid) -> np.ndarray:
    """Row-wise L2 norms of a ``(rows, len(grid))`` array."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        raise ConfigurationError("l2_norm needs at least 3 grid points")
    values = np.asarray(values, dtype=float)
    # scale by the peak so squaring neither underflows nor overflows
    peak = np.max(np.abs(values), axis=-1, keepdims=True)
    safe = np.where(peak > 0, peak, 1.0)
    sq = simpson((values / safe) ** 2, x=grid, axis=-1)
    return peak[..., 0] * np.sqrt(np.maximum(sq, 0.0))
