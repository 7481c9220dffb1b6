"""Fractional relaxation equation ``D^alpha y + y = F``, ``y(0) = y0``.

The solution is marched with the implicit recurrence::

    u_n = (c h^a F_n - sum_{k=1}^{n} w_k u_{n-k}) / (w_0 + c h^a)

where ``(w, c)`` are the weights and normalization of the chosen scheme,
regenerated at every step because the tail weights depend on ``n``.  The
first step uses the second-order starting value built from L1 at ``n = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericalError
from .specfun import gamma, mittag_leffler
from .weights import Scheme, _check_alpha, marching_weights

__all__ = [
    "RelaxationProblem",
    "Trajectory",
    "first_step",
    "solve",
    "max_error",
    "equation_I",
    "equation_II",
    "equation_III",
    "constant_problem",
    "builtin_problem",
]


@dataclass(frozen=True)
class RelaxationProblem:
    alpha: float
    forcing: Callable[[float], float]
    y0: float
    exact: Optional[Callable[[float], float]] = None
    name: str = ""


@dataclass(frozen=True)
class Trajectory:
    h: float
    values: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.h


def first_step(alpha: float, h: float, F1: float, y0: float) -> float:
    """Starting value ``(y0 + Gamma(2-a) h^a F(h)) / (1 + Gamma(2-a) h^a)``."""
    if not h > 0:
        raise DomainError(f"first_step: h must be > 0, got {h}")
    g = gamma(2.0 - alpha) * h**alpha
    return (y0 + g * F1) / (1.0 + g)


def solve(p: RelaxationProblem, scheme: "Scheme | str", h: float, M: int) -> Trajectory:
    """March ``M`` steps of size ``h`` (final time ``M h``)."""
    scheme = Scheme.parse(scheme)
    alpha = _check_alpha(p.alpha)
    if M < 2:
        raise DomainError(f"solve: need M >= 2 steps, got {M}")
    if not h > 0:
        raise DomainError(f"solve: h must be > 0, got {h}")
    ha = h**alpha
    u = np.empty(M + 1)
    u[0] = p.y0
    u[1] = first_step(alpha, h, p.forcing(h), p.y0)
    for n in range(2, M + 1):
        wv = marching_weights(scheme, alpha, n)
        w = wv.weights
        ch = wv.normalization * ha
        denom = w[0] + ch
        # QUAD_SIGMA has c < 0, so test the diagonal 1 + w_0 / (c h^a) instead of denom
        if not denom / ch > 0:
            raise NumericalError(f"solve: degenerate denominator {denom} at step {n}")
        # history u_{n-1}, ..., u_0 against w_1..w_n
        history = float(np.dot(w[1:], u[n - 1 :: -1]))
        u[n] = (ch * p.forcing(n * h) - history) / denom
    return Trajectory(float(h), u)


def max_error(traj: Trajectory, exact: Callable) -> float:
    """Maximum of ``|u_n - y(x_n)|`` over all grid points."""
    ref = np.array([exact(x) for x in traj.x])
    return float(np.max(np.abs(traj.values - ref)))


def equation_I(alpha: float) -> RelaxationProblem:
    """Exact solution ``1 + x + x^2 + x^3 + x^4``."""
    alpha = _check_alpha(alpha)
    coeffs = [math.factorial(p) / gamma(p + 1 - alpha) for p in range(1, 5)]

    def exact(x):
        return 1 + x + x**2 + x**3 + x**4

    def forcing(x):
        if x == 0:
            return exact(x)
        return exact(x) + math.fsum(c * x ** (p - alpha) for p, c in zip(range(1, 5), coeffs))

    return RelaxationProblem(alpha, forcing, 1.0, exact, "I")


def equation_II(alpha: float) -> RelaxationProblem:
    """Exact solution ``e^x``."""
    alpha = _check_alpha(alpha)

    def forcing(x):
        if x == 0:
            return 1.0
        return math.exp(x) + x ** (1 - alpha) * mittag_leffler(1.0, 2.0 - alpha, x).real

    return RelaxationProblem(alpha, forcing, 1.0, math.exp, "II")


def equation_III(alpha: float) -> RelaxationProblem:
    """Exact solution ``cos(2 pi x)``."""
    alpha = _check_alpha(alpha)

    def exact(x):
        return math.cos(2 * math.pi * x)

    def forcing(x):
        if x == 0:
            return 1.0
        return exact(x) - 2 * math.pi * x ** (1 - alpha) * mittag_leffler(1.0, 2.0 - alpha, 2j * math.pi * x).imag

    return RelaxationProblem(alpha, forcing, 1.0, exact, "III")


def constant_problem(alpha: float, value: float = 1.0) -> RelaxationProblem:
    alpha = _check_alpha(alpha)
    return RelaxationProblem(alpha, lambda x: value, value, lambda x: value, "const")


_BUILTINS = {"I": equation_I, "II": equation_II, "III": equation_III, "CONST": constant_problem}


def builtin_problem(name: str, alpha: float) -> RelaxationProblem:
    key = str(name).strip().upper()
    if key not in _BUILTINS:
        raise DomainError(f"unknown relaxation equation {name!r}; expected I, II, III or const")
    return _BUILTINS[key](alpha)
