"""Convolution weights for finite-difference approximations of the Caputo derivative.

Every scheme approximates the Caputo derivative of order ``0 < alpha < 1`` at
``x = n h`` as::

    D^alpha y(x) ~ 1 / (c h^alpha) * sum_{k=0}^{n} w_k y(x - k h)

where ``c`` is the scheme's normalization constant.  The midpoint family
(``MID_*``) is assembled additively: the base midpoint weights, plus
zeta-valued corrections at the head of the vector, plus the tail correction
``W_n`` on the last two entries.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .specfun import gamma, zeta

__all__ = [
    "Scheme",
    "WeightVector",
    "l1_weights",
    "l1_delta_weights",
    "trap_sigma_weights",
    "quad_sigma_weights",
    "omega_weights",
    "mid_sigma_weights",
    "mid_delta_weights",
    "tail_correction",
    "expansion_coeff",
    "scheme_weights",
]


class Scheme(str, enum.Enum):
    L1 = "L1"
    L1_DELTA = "L1_DELTA"
    TRAP_SIGMA = "TRAP_SIGMA"
    QUAD_SIGMA = "QUAD_SIGMA"
    MID_OMEGA = "MID_OMEGA"
    MID_SIGMA = "MID_SIGMA"
    MID_DELTA = "MID_DELTA"

    @classmethod
    def parse(cls, name: "str | Scheme") -> "Scheme":
        if isinstance(name, Scheme):
            return name
        key = str(name).strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            choices = ", ".join(s.value for s in cls)
            raise DomainError(f"unknown scheme {name!r}; expected one of {choices}") from None

    @property
    def min_n(self) -> int:
        return _MIN_N[self]

    def nominal_order(self, alpha: float) -> float:
        if self is Scheme.MID_OMEGA:
            return 1.0 - alpha
        if self in (Scheme.L1_DELTA, Scheme.MID_DELTA):
            return 2.0
        return 2.0 - alpha

    def normalization(self, alpha: float) -> float:
        if self in (Scheme.L1, Scheme.L1_DELTA):
            return gamma(2.0 - alpha)
        if self is Scheme.TRAP_SIGMA:
            return 2.0 * gamma(1.0 - alpha)
        if self is Scheme.QUAD_SIGMA:
            return gamma(-alpha)
        return gamma(1.0 - alpha)


_MIN_N = {
    Scheme.L1: 1,
    Scheme.L1_DELTA: 3,
    Scheme.TRAP_SIGMA: 4,
    Scheme.QUAD_SIGMA: 4,
    Scheme.MID_OMEGA: 1,
    Scheme.MID_SIGMA: 2,
    Scheme.MID_DELTA: 3,
}


@dataclass(frozen=True)
class WeightVector:
    """Weights ``w_0..w_n`` of one scheme at fixed ``(alpha, n)``.

    The approximation is ``sum(w_k * y_{n-k}) / (normalization * h**alpha)``.
    """

    scheme: Scheme
    alpha: float
    n: int
    weights: np.ndarray
    normalization: float

    def __post_init__(self):
        if self.weights.shape != (self.n + 1,):
            raise ValueError(f"expected {self.n + 1} weights, got shape {self.weights.shape}")
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return self.n + 1


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_n(n: int, scheme: Scheme) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < scheme.min_n:
        raise DomainError(f"{scheme.value} needs n >= {scheme.min_n}, got {n}")
    return n


def _neumaier_prefix(terms: np.ndarray, start_sum: float, start_comp: float):
    """Compensated running sums of ``terms``; returns (prefix, final_sum, final_comp)."""
    out = np.empty(len(terms))
    s, c = start_sum, start_comp
    for i, t in enumerate(terms.tolist()):
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
        out[i] = s + c
    return out, s, c


class _AlphaTables:
    """n-independent data for one alpha: interior midpoint weights and odd power sums.

    Arrays only grow, and are replaced wholesale under a lock, so readers that
    grabbed a reference keep a consistent snapshot.
    """

    def __init__(self, alpha: float):
        self.alpha = alpha
        self._lock = threading.Lock()
        self._omega = np.full(1, np.nan)  # omega[k] for k >= 1; slot 0 unused
        self._odd = np.zeros(1)  # odd[n] = sum_{k=1}^{n} (2k-1)^(-alpha)
        self._state = (0.0, 0.0)

    def ensure(self, n: int):
        if len(self._odd) > n:
            return self._omega, self._odd
        with self._lock:
            size = len(self._odd)
            if size <= n:
                new_size = max(n + 1, 2 * size, 64)
                a = self.alpha
                k = np.arange(size, new_size, dtype=float)
                scale = 2.0**a
                omega = np.concatenate([self._omega, scale * ((2 * k + 1) ** -a - (2 * k - 1) ** -a)])
                prefix, s, c = _neumaier_prefix((2 * k - 1) ** -a, *self._state)
                odd = np.concatenate([self._odd, prefix])
                self._state = (s, c)
                self._omega, self._odd = omega, odd
        return self._omega, self._odd


@lru_cache(maxsize=32)
def _tables(alpha: float) -> _AlphaTables:
    return _AlphaTables(alpha)


@lru_cache(maxsize=256)
def _zetas(alpha: float) -> tuple[float, float]:
    return zeta(alpha), zeta(alpha - 1.0)


def _make(scheme: Scheme, alpha: float, n: int, w: np.ndarray) -> WeightVector:
    return WeightVector(scheme, alpha, n, w, scheme.normalization(alpha))


def l1_weights(alpha: float, n: int) -> WeightVector:
    """L1 weights: ``w_0 = 1``, second differences of ``k^(1-alpha)``, ``w_n = (n-1)^(1-a) - n^(1-a)``."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.L1)
    return _make(Scheme.L1, alpha, n, _l1_raw(alpha, n))


def _l1_raw(alpha: float, n: int) -> np.ndarray:
    p = 1.0 - alpha
    k = np.arange(1, n, dtype=float)
    w = np.empty(n + 1)
    w[0] = 1.0
    w[1:n] = (k + 1) ** p - 2 * k**p + (k - 1) ** p
    w[n] = (n - 1.0) ** p - float(n) ** p
    return w


def l1_delta_weights(alpha: float, n: int) -> WeightVector:
    """Second-order correction of L1: adds ``zeta(alpha-1) * (-1, 2, -1)`` at indices 0, 1, 2."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.L1_DELTA)
    return _make(Scheme.L1_DELTA, alpha, n, _l1_delta_raw(alpha, n))


def _l1_delta_raw(alpha: float, n: int) -> np.ndarray:
    w = _l1_raw(alpha, n)
    z1 = _zetas(alpha)[1]
    w[0] -= z1
    w[1] += 2.0 * z1
    w[2] -= z1
    return w


def trap_sigma_weights(alpha: float, n: int) -> WeightVector:
    """Trapezoidal-rule weights, normalization ``2 Gamma(1-alpha)``."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.TRAP_SIGMA)
    za = _zetas(alpha)[0]
    w = np.empty(n + 1)
    w[0] = 1.0 - 2.0 * za
    w[1] = 2.0**-alpha + 2.0 * za
    k = np.arange(2, n - 1, dtype=float)
    w[2 : n - 1] = (k + 1) ** -alpha - (k - 1) ** -alpha
    power_sum = math.fsum((np.arange(1, n, dtype=float) ** -alpha).tolist())
    rest = math.fsum([power_sum, -(n ** (1.0 - alpha)) / (1.0 - alpha), -za])
    w[n - 1] = -((n - 2.0) ** -alpha) - 2.0 * rest
    w[n] = -((n - 1.0) ** -alpha) + 2.0 * rest
    return _make(Scheme.TRAP_SIGMA, alpha, n, w)


def quad_sigma_weights(alpha: float, n: int) -> WeightVector:
    """Quadrature weights with interior ``k^-(1+alpha)``; normalization ``Gamma(-alpha) < 0``."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.QUAD_SIGMA)
    za = _zetas(alpha)[0]
    z1a = zeta(1.0 + alpha)
    k_all = np.arange(1, n, dtype=float)
    tail1 = z1a - math.fsum((k_all ** -(1.0 + alpha)).tolist())
    tail0 = za - math.fsum((k_all**-alpha).tolist())
    big = n ** (1.0 - alpha) / (alpha * (1.0 - alpha))
    w = np.empty(n + 1)
    w[0] = za - z1a
    w[1] = 1.0 - za
    k = np.arange(2, n - 1, dtype=float)
    w[2 : n - 1] = k ** -(1.0 + alpha)
    w[n - 1] = math.fsum([(n - 1.0) ** -(1.0 + alpha), -big, n * tail1, -tail0])
    w[n] = math.fsum([(1.0 - n) * tail1, tail0, big])
    return _make(Scheme.QUAD_SIGMA, alpha, n, w)


def _omega_raw(alpha: float, n: int) -> np.ndarray:
    omega, _ = _tables(alpha).ensure(n)
    scale = 2.0**alpha
    w = np.empty(n + 1)
    w[0] = scale
    w[1:n] = omega[1:n]
    w[n] = -scale * (2.0 * n - 1.0) ** -alpha
    return w


def omega_weights(alpha: float, n: int) -> WeightVector:
    """Midpoint weights ``2^a, 2^a((2k+1)^-a - (2k-1)^-a), ..., -2^a (2n-1)^-a`` (order ``1 - alpha``)."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.MID_OMEGA)
    return _make(Scheme.MID_OMEGA, alpha, n, _omega_raw(alpha, n))


def tail_correction(alpha: float, n: int) -> float:
    """Tail correction ``W_n`` that makes the midpoint schemes exact on ``y(x) = x``.

    ``W_n = zeta(a) - n^(1-a)/(1-a) + 2^a (sum_{k=1}^{n} (2k-1)^-a - zeta(a))``,
    positive and bounded by ``a / (24 n^(1+a))``.
    """
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.MID_OMEGA)
    return _tail_raw(alpha, n)


def _tail_raw(alpha: float, n: int) -> float:
    _, odd = _tables(alpha).ensure(n)
    za = _zetas(alpha)[0]
    scale = 2.0**alpha
    return math.fsum([(1.0 - scale) * za, -(n ** (1.0 - alpha)) / (1.0 - alpha), scale * float(odd[n])])


def _mid_sigma_raw(alpha: float, n: int) -> np.ndarray:
    w = _omega_raw(alpha, n)
    head = (2.0**alpha - 1.0) * _zetas(alpha)[0]
    w[0] -= head
    w[1] += head
    tail = _tail_raw(alpha, n)
    w[n - 1] -= tail
    w[n] += tail
    return w


def mid_sigma_weights(alpha: float, n: int) -> WeightVector:
    """Order ``2 - alpha`` midpoint weights.

    Examples
    --------
    >>> w = mid_sigma_weights(0.5, 16)
    >>> abs(w.weights.sum()) < 1e-12
    True
    """
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.MID_SIGMA)
    return _make(Scheme.MID_SIGMA, alpha, n, _mid_sigma_raw(alpha, n))


def _mid_delta_raw(alpha: float, n: int) -> np.ndarray:
    w = _omega_raw(alpha, n)
    za, za1 = _zetas(alpha)
    first = (1.0 - 2.0**alpha) * za
    second = (2.0 ** (alpha - 1.0) - 1.0) * za1
    w[0] += 1.5 * first + second
    w[1] += -2.0 * first - 2.0 * second
    w[2] += 0.5 * first + second
    tail = _tail_raw(alpha, n)
    w[n - 1] -= tail
    w[n] += tail
    return w


def mid_delta_weights(alpha: float, n: int) -> WeightVector:
    """Second-order midpoint weights (head corrections at indices 0..2 plus the ``W_n`` tail)."""
    alpha = _check_alpha(alpha)
    n = _check_n(n, Scheme.MID_DELTA)
    return _make(Scheme.MID_DELTA, alpha, n, _mid_delta_raw(alpha, n))


_GENERATORS = {
    Scheme.L1: l1_weights,
    Scheme.L1_DELTA: l1_delta_weights,
    Scheme.TRAP_SIGMA: trap_sigma_weights,
    Scheme.QUAD_SIGMA: quad_sigma_weights,
    Scheme.MID_OMEGA: omega_weights,
    Scheme.MID_SIGMA: mid_sigma_weights,
    Scheme.MID_DELTA: mid_delta_weights,
}


def scheme_weights(scheme: "Scheme | str", alpha: float, n: int) -> WeightVector:
    """Dispatch to the generator of ``scheme``."""
    return _GENERATORS[Scheme.parse(scheme)](alpha, n)


def marching_weights(scheme: Scheme, alpha: float, n: int) -> WeightVector:
    """Weights for step ``n`` of a time-marching solver, defined for every ``n >= 1``.

    Below a scheme's minimum ``n`` the second-order schemes keep their head
    corrections superposed on the short vector (``n = 2``), and the trapezoid
    and quadrature schemes fall back to L1.
    """
    alpha = _check_alpha(alpha)
    if n >= scheme.min_n:
        return _GENERATORS[scheme](alpha, n)
    if n == 2 and scheme is Scheme.MID_DELTA:
        return _make(scheme, alpha, n, _mid_delta_raw(alpha, n))
    if n == 2 and scheme is Scheme.L1_DELTA:
        return _make(scheme, alpha, n, _l1_delta_raw(alpha, n))
    return l1_weights(alpha, n)


def expansion_coeff(scheme: "Scheme | str", alpha: float) -> float:
    """Coefficient of the ``y''(x) h^(2-alpha)`` term in the error expansion.

    Defined for L1 (C1), TRAP_SIGMA (C8), QUAD_SIGMA (C9) and MID_SIGMA (C10).
    """
    scheme = Scheme.parse(scheme)
    alpha = _check_alpha(alpha)
    za, za1 = zeta(alpha), zeta(alpha - 1.0)
    if scheme is Scheme.L1:
        return za1 / gamma(2.0 - alpha)
    if scheme is Scheme.TRAP_SIGMA:
        return (za - 2.0 * za1) / (2.0 * gamma(1.0 - alpha))
    if scheme is Scheme.QUAD_SIGMA:
        return (za - za1) / (2.0 * gamma(-alpha))
    if scheme is Scheme.MID_SIGMA:
        p = 2.0**alpha
        return ((2.0 - p) * za1 - (p - 1.0) * za) / (2.0 * gamma(1.0 - alpha))
    raise DomainError(f"no expansion coefficient for scheme {scheme.value}")
