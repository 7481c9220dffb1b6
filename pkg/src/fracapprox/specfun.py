"""Scalar special functions: Gamma, Riemann zeta, polylogarithm, Mittag-Leffler.

Everything is evaluated in double precision.  Zeta is built on the
alternating (Dirichlet eta) series with Borwein's acceleration and mapped to
``s <= 0`` through the functional equation.  The polylogarithm switches
between its power series and the logarithmic expansion about ``x = 1``
(with a complex logarithm for negative ``x``).
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from .errors import DomainError, NumericalError

__all__ = ["gamma", "zeta", "eta", "polylog", "mittag_leffler"]

_BORWEIN_TERMS = 40
_ML_MAX_TERMS = 10_000
_ML_RTOL = 1e-15
_ML_MAX_ABS_Z = 50.0
# largest tolerated eps * max|term| / |sum| before the result is called unreliable
_ML_MAX_CANCEL = 1e-9
_EPS = 2.220446049250313e-16


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function on the real line minus the poles ``0, -1, -2, ...``."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma: argument must be finite, got {x}")
    if _is_nonpositive_integer(x):
        raise DomainError(f"gamma: pole at non-positive integer {x}")
    return math.gamma(x)


@lru_cache(maxsize=1)
def _borwein_coefficients(n: int) -> tuple[float, ...]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    d = []
    acc = 0.0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i / (math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    return tuple(d)


def eta(s: float) -> float:
    """Dirichlet eta function ``sum (-1)^(k-1) / k^s`` for real ``s > 0``."""
    s = float(s)
    if not s > 0:
        raise DomainError(f"eta: series form needs s > 0, got {s}")
    n = _BORWEIN_TERMS
    d = _borwein_coefficients(n)
    dn = d[n]
    terms = [(-1) ** k * (d[k] - dn) / (k + 1) ** s for k in range(n)]
    return -math.fsum(terms) / dn


def zeta(s: float) -> float:
    """Riemann zeta function for real ``s != 1``.

    Examples
    --------
    >>> round(zeta(2.0), 12) == round(math.pi**2 / 6, 12)
    True
    """
    s = float(s)
    if not math.isfinite(s):
        raise DomainError(f"zeta: argument must be finite, got {s}")
    if s == 1.0:
        raise DomainError("zeta: pole at s = 1")
    if s == 0.0:
        return -0.5
    if s > 0:
        # 1 - 2^(1-s), written to stay accurate near s = 1
        return eta(s) / -math.expm1((1.0 - s) * math.log(2.0))
    if s == math.floor(s) and int(s) % 2 == 0:
        return 0.0
    t = 1.0 - s
    # zeta(1 - s) with the pole factor 1 - 2^s taken from s itself: t is rounded
    zeta_t = eta(t) / -math.expm1(s * math.log(2.0))
    return 2.0**s * math.pi ** (s - 1.0) * math.sin(math.pi * s / 2.0) * math.gamma(t) * zeta_t


def _polylog_series(s: float, x: float) -> float:
    terms = []
    xk = x
    k = 1
    while True:
        term = xk / k**s
        terms.append(term)
        if abs(xk) < 1e-18 * max(1.0, abs(terms[0])) and k > 2:
            break
        k += 1
        xk *= x
        if k > 200_000:
            raise NumericalError(f"polylog: series did not converge for s={s}, x={x}")
    return math.fsum(terms)


def _polylog_log_expansion(s: float, x: float) -> float:
    """Expansion in powers of ``mu = ln(x)`` about ``x = 1``, valid for ``|mu| < 2 pi``.

    For ``x < 0`` the principal logarithm ``ln|x| + i pi`` is used and the
    real part is returned.
    """
    mu = complex(math.log(abs(x)), math.pi if x < 0 else 0.0)
    terms = []
    is_int = s == math.floor(s) and s >= 1
    if is_int:
        p = int(s) - 1
        harmonic = math.fsum(1.0 / j for j in range(1, p + 1))
        terms.append(mu**p / math.factorial(p) * (harmonic - cmath.log(-mu)))
    else:
        terms.append(math.gamma(1.0 - s) * (-mu) ** (s - 1.0))
    fact = 1.0
    mu_n = 1.0 + 0j
    quiet = 0
    for n in range(0, 160):
        if n > 0:
            fact *= n
            mu_n *= mu
        if is_int and n == int(s) - 1:
            continue
        term = zeta(s - n) * mu_n / fact
        terms.append(term)
        # zeta vanishes at negative even integers, so one tiny term proves nothing
        if abs(term) < 1e-18 * abs(sum(terms)):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return math.fsum(t.real for t in terms)


def polylog(s: float, x: float) -> float:
    """Polylogarithm ``Li_s(x) = sum_{n>=1} x^n / n^s`` for real ``|x| <= 1``.

    ``x = 1`` requires ``s > 1`` (then ``Li_s(1) = zeta(s)``).
    """
    s = float(s)
    x = float(x)
    if not (math.isfinite(s) and math.isfinite(x)):
        raise DomainError("polylog: arguments must be finite")
    if abs(x) > 1.0:
        raise DomainError(f"polylog: |x| must be <= 1, got {x}")
    if x == 1.0:
        if s <= 1.0:
            raise DomainError(f"polylog: series diverges at x = 1 for s = {s} <= 1")
        return zeta(s)
    if x == -1.0:
        if s == 1.0:
            return -math.log(2.0)
        return -(-math.expm1((1.0 - s) * math.log(2.0))) * zeta(s)
    if x == 0.0:
        return 0.0
    if s == 1.0:
        return -math.log1p(-x)
    # the alternating series cancels for s < 0 as x nears -1/2, and the
    # duplication identity cancels near x = -1, so negative x also expands
    if (-0.2 if s <= 0 else -0.5) <= x <= 0.5:
        return _polylog_series(s, x)
    return _polylog_log_expansion(s, x)


def mittag_leffler(a: float, b: float, z: complex) -> complex:
    """Two-parameter Mittag-Leffler function ``E_{a,b}(z) = sum z^k / Gamma(a k + b)``.

    Plain power series with compensated (Neumaier) summation.  Intended for
    moderate arguments only; ``|z| > 50`` is rejected.

    Raises
    ------
    DomainError
        For ``a <= 0``, ``b <= 0`` or ``|z| > 50``.
    NumericalError
        If the series has not converged after 10000 terms, or if cancellation
        between large terms leaves fewer than about nine reliable digits
        (large negative real arguments).
    """
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0):
        raise DomainError(f"mittag_leffler: need a > 0 and b > 0, got a={a}, b={b}")
    z = complex(z)
    r = abs(z)
    if not math.isfinite(r) or r > _ML_MAX_ABS_Z:
        raise DomainError(f"mittag_leffler: |z| = {r} outside the series regime |z| <= 50")
    if r == 0.0:
        return complex(1.0 / math.gamma(b))
    log_r = math.log(r)
    phase = z / r
    total = 0j
    comp = 0j
    small = 0
    peak = 0.0
    for k in range(_ML_MAX_TERMS):
        arg = a * k + b
        try:
            if arg < 170.0:
                term = z**k / math.gamma(arg)
                mag = abs(term)
            else:
                mag = math.exp(k * log_r - math.lgamma(arg))
                term = mag * phase**k
        except OverflowError:
            raise NumericalError(f"mittag_leffler: series terms overflow (a={a}, b={b}, z={z})") from None
        t = total + term
        # Neumaier compensation, separately on each component
        cr = (total.real - t.real) + term.real if abs(total.real) >= abs(term.real) else (term.real - t.real) + total.real
        ci = (total.imag - t.imag) + term.imag if abs(total.imag) >= abs(term.imag) else (term.imag - t.imag) + total.imag
        comp += complex(cr, ci)
        total = t
        peak = max(peak, mag)
        # terms decrease once a k + b exceeds r^(1/a)-ish; require a few quiet terms
        if k > 0 and mag <= _ML_RTOL * abs(total + comp) and a * k + b > r ** (1.0 / a):
            small += 1
            if small >= 3:
                result = total + comp
                if peak * _EPS > _ML_MAX_CANCEL * abs(result):
                    raise NumericalError(
                        f"mittag_leffler: cancellation, terms up to {peak:.3g} for a sum of {abs(result):.3g}"
                        f" (a={a}, b={b}, z={z})"
                    )
                return result
        else:
            small = 0
    raise NumericalError(f"mittag_leffler: no convergence in {_ML_MAX_TERMS} terms (a={a}, b={b}, z={z})")

