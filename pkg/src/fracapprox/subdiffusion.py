"""Implicit scheme for the time-fractional subdiffusion equation.

Solves ``D_t^alpha u = D u_xx + F`` on ``[0, 1] x [0, T]`` with Dirichlet data,
using the order ``2 - alpha`` midpoint weights in time and central
differences in space.  Each time layer is a symmetric, strictly diagonally
dominant tridiagonal system, solved with the Thomas algorithm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericalError
from .specfun import gamma, mittag_leffler
from .weights import _check_alpha, mid_sigma_weights

__all__ = [
    "SubdiffusionProblem",
    "SpaceTimeGrid",
    "TridiagonalSystem",
    "SubdiffusionResult",
    "thomas_solve",
    "assemble_step",
    "first_layer",
    "solve",
    "example_1",
    "example_2",
    "regularize_example_2",
]


@dataclass(frozen=True)
class SubdiffusionProblem:
    """Problem data.  ``source(x, t)`` and ``u0(x)`` must accept numpy arrays in ``x``."""

    D: float
    source: Callable
    u0: Callable
    uL: Callable[[float], float]
    uR: Callable[[float], float]
    T: float = 1.0
    exact: Optional[Callable] = None


@dataclass(frozen=True)
class SpaceTimeGrid:
    N: int
    M: int
    T: float = 1.0

    def __post_init__(self):
        if self.N < 2 or self.M < 2:
            raise DomainError(f"grid needs N >= 2 and M >= 2, got N={self.N}, M={self.M}")
        if not self.T > 0:
            raise DomainError(f"grid needs T > 0, got {self.T}")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def tau(self) -> float:
        return self.T / self.M

    @property
    def interior(self) -> np.ndarray:
        return np.arange(1, self.N) / self.N


@dataclass
class TridiagonalSystem:
    """``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``; ``lower[0]``, ``upper[-1]`` unused."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.lower[1:] * x[:-1]
        y[:-1] += self.upper[:-1] * x[1:]
        return y

    def dense(self) -> np.ndarray:
        n = len(self.diag)
        A = np.diag(self.diag)
        A[np.arange(1, n), np.arange(n - 1)] = self.lower[1:]
        A[np.arange(n - 1), np.arange(1, n)] = self.upper[:-1]
        return A


def _constant_system(diag: float, off: float, rhs: np.ndarray) -> TridiagonalSystem:
    n = len(rhs)
    return TridiagonalSystem(np.full(n, off), np.full(n, diag), np.full(n, off), rhs)


def thomas_solve(sys: TridiagonalSystem) -> np.ndarray:
    """Solve a tridiagonal system by forward elimination and back substitution.

    No pivoting; intended for diagonally dominant matrices.
    """
    a = np.asarray(sys.lower, dtype=float)
    b = np.asarray(sys.diag, dtype=float)
    c = np.asarray(sys.upper, dtype=float)
    d = np.asarray(sys.rhs, dtype=float)
    n = len(b)
    if not (len(a) == len(c) == len(d) == n):
        raise DomainError("thomas_solve: bands and rhs must have equal length")
    cp = np.empty(n)
    dp = np.empty(n)
    if b[0] == 0.0:
        raise NumericalError("thomas_solve: zero pivot in row 0")
    cp[0] = c[0] / b[0]
    dp[0] = d[0] / b[0]
    for i in range(1, n):
        denom = b[i] - a[i] * cp[i - 1]
        if denom == 0.0:
            raise NumericalError(f"thomas_solve: zero pivot in row {i}")
        cp[i] = c[i] / denom
        dp[i] = (d[i] - a[i] * dp[i - 1]) / denom
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def assemble_step(alpha, grid: SpaceTimeGrid, D, history, source, uL_m, uR_m, m: int) -> TridiagonalSystem:
    """Tridiagonal system for layer ``m >= 2``.

    ``history`` holds the interior values of layers ``0..m-1`` as rows.
    ``source`` is either a callable ``source(x, t)`` or the precomputed
    source values on the interior nodes at ``t = m tau``.
    """
    history = np.asarray(history, dtype=float)
    if m < 2:
        raise DomainError(f"assemble_step: m must be >= 2, got {m}")
    if history.shape != (m, grid.N - 1):
        raise DomainError(f"assemble_step: history must have shape {(m, grid.N - 1)}, got {history.shape}")
    w = mid_sigma_weights(alpha, m).weights
    g = gamma(1.0 - alpha)
    ta = grid.tau**alpha
    eta = g * D * ta / grid.h**2
    f = source(grid.interior, m * grid.tau) if callable(source) else np.asarray(source, dtype=float)
    # sum_{k=1}^{m} w_k U^{m-k}: rows m-1..0 of the history against w_1..w_m
    rhs = -(w[1:] @ history[::-1]) + g * ta * f
    rhs[0] += eta * uL_m
    rhs[-1] += eta * uR_m
    return _constant_system(w[0] + 2.0 * eta, -eta, rhs)


def first_layer(alpha, grid: SpaceTimeGrid, D, u0_values, source, uL_1, uR_1) -> np.ndarray:
    """Layer 1 from the L1 step ``(U^1 - U^0) / (tau^a Gamma(2-a))``."""
    g2 = gamma(2.0 - alpha)
    ta = grid.tau**alpha
    eta = g2 * D * ta / grid.h**2
    f = source(grid.interior, grid.tau) if callable(source) else np.asarray(source, dtype=float)
    rhs = np.asarray(u0_values, dtype=float) + g2 * ta * f
    rhs[0] += eta * uL_1
    rhs[-1] += eta * uR_1
    return thomas_solve(_constant_system(1.0 + 2.0 * eta, -eta, rhs))


@dataclass(frozen=True)
class SubdiffusionResult:
    grid: SpaceTimeGrid
    x: np.ndarray
    U: np.ndarray
    exact: Optional[np.ndarray]
    error: Optional[float]
    layers: Optional[np.ndarray] = None


def solve(p: SubdiffusionProblem, alpha: float, grid: SpaceTimeGrid, keep_layers: bool = False) -> SubdiffusionResult:
    """March all ``M`` layers and report the final layer at ``t = T``.

    ``error`` is the max interior deviation from ``p.exact`` at ``t = T``.
    """
    alpha = _check_alpha(alpha)
    if abs(grid.T - p.T) > 1e-14 * p.T:
        raise DomainError(f"grid final time {grid.T} differs from problem T={p.T}")
    x = grid.interior
    tau = grid.tau
    H = np.empty((grid.M + 1, grid.N - 1))
    H[0] = p.u0(x)
    H[1] = first_layer(alpha, grid, p.D, H[0], p.source, p.uL(tau), p.uR(tau))
    for m in range(2, grid.M + 1):
        t = m * tau
        sys = assemble_step(alpha, grid, p.D, H[:m], p.source, p.uL(t), p.uR(t), m)
        H[m] = thomas_solve(sys)
    exact = err = None
    if p.exact is not None:
        exact = np.asarray(p.exact(x, grid.T), dtype=float)
        err = float(np.max(np.abs(H[-1] - exact)))
    return SubdiffusionResult(grid, x, H[-1].copy(), exact, err, H if keep_layers else None)


def example_1(alpha: float) -> SubdiffusionProblem:
    """Smooth example with solution ``e^(x+t)``."""
    alpha = _check_alpha(alpha)

    def source(x, t):
        caputo_exp = t ** (1 - alpha) * mittag_leffler(1.0, 2.0 - alpha, t).real if t > 0 else 0.0
        return np.exp(x) * (caputo_exp - math.exp(t))

    return SubdiffusionProblem(
        D=1.0,
        source=source,
        u0=np.exp,
        uL=math.exp,
        uR=lambda t: math.exp(t + 1.0),
        T=1.0,
        exact=lambda x, t: np.exp(x + t),
    )


def _ml_decay(alpha: float, t: float) -> float:
    return mittag_leffler(alpha, 1.0, -(t**alpha)).real


def example_2(alpha: float) -> SubdiffusionProblem:
    """Solution ``sin(pi x) E_alpha(-t^alpha)``, singular in ``t`` at 0."""
    alpha = _check_alpha(alpha)
    return SubdiffusionProblem(
        D=1.0 / math.pi**2,
        source=lambda x, t: np.zeros_like(x),
        u0=lambda x: np.sin(np.pi * x),
        uL=lambda t: 0.0,
        uR=lambda t: 0.0,
        T=1.0,
        exact=lambda x, t: np.sin(np.pi * x) * _ml_decay(alpha, t),
    )


def regularize_example_2(alpha: float, m: int):
    """Subtract the order-``m`` fractional Taylor polynomial from the solution of example 2.

    Returns ``(problem, recover)``; ``problem`` is solved by
    ``v = u - sin(pi x) P_m(t)`` with ``P_m(t) = sum_{n<=m} (-1)^n t^(n a) / Gamma(n a + 1)``
    and ``recover(x, t, v)`` maps back to ``u``.  Full smoothness needs
    ``m * alpha >= 2``; smaller ``m`` is allowed but warns.
    """
    alpha = _check_alpha(alpha)
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"regularize_example_2: m must be a positive integer, got {m!r}")
    m = int(m)
    if m * alpha < 2:
        warnings.warn(
            f"m*alpha = {m * alpha:g} < 2: the regularized solution is not C^2 in time at t = 0",
            stacklevel=2,
        )
    gammas = [gamma(n * alpha + 1.0) for n in range(m + 1)]

    def poly(t):
        return math.fsum((-1) ** n * t ** (n * alpha) / gammas[n] for n in range(m + 1))

    sign = (-1) ** (m + 1)

    def source(x, t):
        return sign * np.sin(np.pi * x) * t ** (m * alpha) / gammas[m]

    def exact(x, t):
        return np.sin(np.pi * x) * (_ml_decay(alpha, t) - poly(t))

    def recover(x, t, v):
        return v + np.sin(np.pi * x) * poly(t)

    problem = SubdiffusionProblem(
        D=1.0 / math.pi**2,
        source=source,
        u0=lambda x: np.zeros_like(x),
        uL=lambda t: 0.0,
        uR=lambda t: 0.0,
        T=1.0,
        exact=exact,
    )
    return problem, recover

