"""Apply weight vectors to grid samples, and manufactured test functions.

The test functions all have closed-form Caputo derivatives, which makes them
usable as exact references for consistency and convergence checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .specfun import gamma, mittag_leffler, zeta
from .weights import Scheme, WeightVector, omega_weights, scheme_weights

__all__ = [
    "TestFunction",
    "GridSample",
    "sample",
    "apply",
    "approximate",
    "exact_caputo",
    "evaluate",
    "expansion_residual",
    "loglog_slope",
]


class TestFunction(str, enum.Enum):
    ONE = "ONE"
    X = "X"
    X2 = "X2"
    X3 = "X3"
    POLY4 = "POLY4"
    EXP = "EXP"
    COS2PI = "COS2PI"

    __test__ = False  # not a pytest class

    @classmethod
    def parse(cls, name: "str | TestFunction") -> "TestFunction":
        if isinstance(name, TestFunction):
            return name
        try:
            return cls[str(name).strip().upper()]
        except KeyError:
            choices = ", ".join(f.value for f in cls)
            raise DomainError(f"unknown test function {name!r}; expected one of {choices}") from None


def _power_caputo(p: int, alpha: float, x: float) -> float:
    # D^alpha x^p = p! x^(p - alpha) / Gamma(p + 1 - alpha), p >= 1
    if x == 0.0:
        return 0.0
    return math.factorial(p) * x ** (p - alpha) / gamma(p + 1 - alpha)


def evaluate(f: "TestFunction | str", x):
    """Values of a test function at ``x`` (scalar or array)."""
    f = TestFunction.parse(f)
    x = np.asarray(x, dtype=float)
    if f is TestFunction.ONE:
        out = np.ones_like(x)
    elif f is TestFunction.X:
        out = x.copy()
    elif f is TestFunction.X2:
        out = x**2
    elif f is TestFunction.X3:
        out = x**3
    elif f is TestFunction.POLY4:
        out = 1 + x + x**2 + x**3 + x**4
    elif f is TestFunction.EXP:
        out = np.exp(x)
    else:
        out = np.cos(2 * np.pi * x)
    return out if out.ndim else float(out)


def _derivative(f: TestFunction, order: int, x: float) -> float:
    table = {
        TestFunction.ONE: (lambda x: 0.0, lambda x: 0.0),
        TestFunction.X: (lambda x: 1.0, lambda x: 0.0),
        TestFunction.X2: (lambda x: 2 * x, lambda x: 2.0),
        TestFunction.X3: (lambda x: 3 * x**2, lambda x: 6 * x),
        TestFunction.POLY4: (lambda x: 1 + 2 * x + 3 * x**2 + 4 * x**3, lambda x: 2 + 6 * x + 12 * x**2),
        TestFunction.EXP: (math.exp, math.exp),
        TestFunction.COS2PI: (
            lambda x: -2 * math.pi * math.sin(2 * math.pi * x),
            lambda x: -4 * math.pi**2 * math.cos(2 * math.pi * x),
        ),
    }
    return table[f][order - 1](x)


def exact_caputo(f: "TestFunction | str", alpha: float, x: float) -> float:
    """Closed-form Caputo derivative of order ``alpha`` of a test function at ``x >= 0``."""
    f = TestFunction.parse(f)
    alpha = float(alpha)
    x = float(x)
    if x < 0:
        raise DomainError(f"exact_caputo: x must be >= 0, got {x}")
    if f is TestFunction.ONE:
        return 0.0
    if f is TestFunction.X:
        return _power_caputo(1, alpha, x)
    if f is TestFunction.X2:
        return _power_caputo(2, alpha, x)
    if f is TestFunction.X3:
        return _power_caputo(3, alpha, x)
    if f is TestFunction.POLY4:
        return math.fsum(_power_caputo(p, alpha, x) for p in range(1, 5))
    if x == 0.0:
        return 0.0
    if f is TestFunction.EXP:
        return x ** (1 - alpha) * mittag_leffler(1.0, 2.0 - alpha, x).real
    # i pi x^(1-a) (E(2 pi i x) - E(-2 pi i x)) is real: -2 pi x^(1-a) Im E(2 pi i x)
    return -2 * math.pi * x ** (1 - alpha) * mittag_leffler(1.0, 2.0 - alpha, 2j * math.pi * x).imag


@dataclass(frozen=True)
class GridSample:
    """Values ``y_0..y_n`` of a function on the uniform grid ``k x / n``."""

    x: float
    n: int
    values: np.ndarray

    @property
    def h(self) -> float:
        return self.x / self.n

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"GridSample: x must be > 0, got {self.x}")
        if self.n < 1:
            raise DomainError(f"GridSample: n must be >= 1, got {self.n}")
        if len(self.values) != self.n + 1:
            raise DomainError(f"GridSample: expected {self.n + 1} values, got {len(self.values)}")


def sample(f: "Callable | TestFunction | str", x: float, n: int) -> GridSample:
    """Sample ``f`` at ``k * x / n`` for ``k = 0..n``."""
    nodes = np.arange(n + 1) * float(x) / n
    if isinstance(f, (TestFunction, str)):
        values = np.asarray(evaluate(f, nodes), dtype=float)
    else:
        values = np.asarray(f(nodes), dtype=float)
    return GridSample(float(x), int(n), values)


def apply(w: WeightVector, s: GridSample) -> float:
    """``sum_k w_k y_{n-k} / (normalization * h**alpha)``."""
    if w.n != s.n:
        raise DomainError(f"weight length n={w.n} does not match sample n={s.n}")
    return float(np.dot(w.weights, s.values[::-1])) / (w.normalization * s.h**w.alpha)


def approximate(scheme: "Scheme | str", f: "TestFunction | str", alpha: float, x: float, n: int) -> float:
    """Convenience: sample ``f``, build the scheme's weights and apply them."""
    return apply(scheme_weights(scheme, alpha, n), sample(f, x, n))


def expansion_residual(
    f: "TestFunction | str",
    alpha: float,
    x: float,
    h_list: Sequence[float],
    scheme: "Scheme | str" = Scheme.MID_OMEGA,
) -> np.ndarray:
    """Residual of the midpoint approximation after removing its two leading error terms.

    For ``f`` with ``f(0) = f'(0) = f''(0) = 0`` returns, for each ``h``::

        r(h) = A_h[f] - D^alpha f(x) - c1 f'(x) h^(1-alpha) - c2 f''(x) h^(2-alpha)

    which should decay like ``h**2``.  ``x / h`` must be an integer.
    """
    f = TestFunction.parse(f)
    if Scheme.parse(scheme) is not Scheme.MID_OMEGA:
        raise DomainError("expansion_residual is defined for MID_OMEGA only")
    y0 = float(evaluate(f, 0.0))
    if f is not TestFunction.ONE and (y0 != 0.0 or _derivative(f, 1, 0.0) != 0.0 or _derivative(f, 2, 0.0) != 0.0):
        raise DomainError(f"expansion_residual: {f.value} does not vanish to second order at 0")
    g1 = gamma(1.0 - alpha)
    c1 = (2.0**alpha - 1.0) * zeta(alpha) / g1
    c2 = -(2.0 ** (alpha - 1.0) - 1.0) * zeta(alpha - 1.0) / g1
    exact = exact_caputo(f, alpha, x)
    d1, d2 = _derivative(f, 1, x), _derivative(f, 2, x)
    out = []
    for h in h_list:
        n = int(round(x / h))
        if n < 1 or abs(n * h - x) > 1e-12 * x:
            raise DomainError(f"expansion_residual: x / h = {x / h} is not an integer")
        approx = apply(omega_weights(alpha, n), sample(f, x, n))
        out.append(approx - exact - c1 * d1 * h ** (1 - alpha) - c2 * d2 * h ** (2 - alpha))
    return np.array(out)


def loglog_slope(h, err) -> float:
    """Least-squares slope of ``log|err|`` against ``log h``."""
    h = np.asarray(h, dtype=float)
    err = np.abs(np.asarray(err, dtype=float))
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])
