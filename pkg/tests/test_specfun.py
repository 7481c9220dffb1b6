import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracapprox import DomainError, NumericalError
from fracapprox.specfun import eta, gamma, mittag_leffler, polylog, zeta

mpmath.mp.dps = 40


def ml_oracle(a, b, z, terms=400):
    z = mpmath.mpc(z)
    return complex(mpmath.fsum(z**k / mpmath.gamma(a * k + b) for k in range(terms)))


def rel(a, b):
    return abs(a - b) / abs(b)


# -- gamma ------------------------------------------------------------------


def test_gamma_closed_forms():
    assert gamma(5) == 24
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("x", [0, -1, -2, -7])
def test_gamma_poles(x):
    with pytest.raises(DomainError):
        gamma(x)


def test_gamma_against_oracle():
    for x in np.linspace(-2.95, 10, 97):
        if abs(x - round(x)) < 1e-3 and x <= 0:
            continue
        assert rel(gamma(x), float(mpmath.gamma(x))) < 1e-13


def _away_from_poles(x):
    return x > 0 or abs(x - round(x)) >= 0.05


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 5).filter(_away_from_poles).filter(lambda x: _away_from_poles(x + 1)))
def test_gamma_recurrence(x):
    assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-12)


# -- zeta / eta -------------------------------------------------------------


def test_zeta_reference_values():
    assert zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert zeta(0.5) == pytest.approx(-1.4603545088095868, rel=1e-13)
    assert zeta(-0.5) == pytest.approx(-0.20788622497735457, rel=1e-13)
    assert zeta(0) == -0.5
    assert zeta(-2) == 0.0


def test_zeta_pole():
    with pytest.raises(DomainError):
        zeta(1)


@pytest.mark.parametrize("s", np.concatenate([np.linspace(-3, 4, 71), [0.999, 1.001, -0.001, 0.25, 0.75, -0.75]]))
def test_zeta_against_oracle(s):
    if s == 1 or (s < 0 and s == round(s) and round(s) % 2 == 0):
        pytest.skip("pole or trivial zero")
    ref = float(mpmath.zeta(s))
    assert zeta(s) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_zeta_negative_on_unit_interval():
    for a in np.linspace(0.01, 0.99, 99):
        assert zeta(a) < 0


def test_eta_matches_alternating_series():
    assert eta(1.0) == pytest.approx(math.log(2), rel=1e-14)
    assert eta(0.5) == pytest.approx(float(mpmath.altzeta(0.5)), rel=1e-14)
    with pytest.raises(DomainError):
        eta(0)


# -- polylog ----------------------------------------------------------------


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_polylog_at_one_is_zeta(s):
    assert polylog(s, 1) == pytest.approx(zeta(s), rel=1e-12)


def test_polylog_simple_values():
    assert polylog(1, 0.5) == pytest.approx(math.log(2), rel=1e-15)
    assert polylog(2, -1) == pytest.approx(-(math.pi**2) / 12, rel=1e-14)
    assert polylog(0.5, 0) == 0.0
    # Li_{-1}(x) = x / (1 - x)^2
    assert polylog(-1, -0.99) == pytest.approx(-0.99 / 1.99**2, rel=1e-13)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [0.1, -0.1, 0.5, -0.5, 0.9, -0.9])
def test_polylog_duplication(s, x):
    lhs = polylog(s, x) + polylog(s, -x)
    assert lhs == pytest.approx(2 ** (1 - s) * polylog(s, x * x), abs=1e-11)


@pytest.mark.parametrize("s", [-2.5, -1.0, -0.5, 0.25, 0.5, 0.999, 1.5, 2.0, 3.5])
@pytest.mark.parametrize("x", [-0.9999, -0.99, -0.7, -0.5, -0.3, 0.05, 0.3, 0.6, 0.8, 0.95, 0.999])
def test_polylog_against_oracle(s, x):
    # mpmath may return a complex value with a negligible imaginary part
    ref = complex(mpmath.polylog(s, x)).real
    assert polylog(s, x) == pytest.approx(ref, rel=1e-12)


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog(1.0, 1.0)
    with pytest.raises(DomainError):
        polylog(0.5, 1.0)
    with pytest.raises(DomainError):
        polylog(2.0, 1.5)


# -- Mittag-Leffler ---------------------------------------------------------


def test_mittag_leffler_elementary():
    assert mittag_leffler(1, 1, 1) == pytest.approx(math.e, rel=1e-15)
    assert mittag_leffler(1, 2, 1) == pytest.approx(math.e - 1, rel=1e-15)
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    assert mittag_leffler(0.5, 1, -1).real == pytest.approx(math.exp(1) * math.erfc(1), rel=1e-13)
    assert mittag_leffler(0.5, 1, -1).real == pytest.approx(0.4275835762, rel=1e-9)
    # E_{1,3/2}(1) = e erf(1) / sqrt(1) after the Gamma(1/2) factor is absorbed
    assert mittag_leffler(1, 1.5, 1).real == pytest.approx(math.e * math.erf(1), rel=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 1.7, 2.0])
def test_mittag_leffler_real_against_series(alpha, x):
    ref = ml_oracle(1, 2 - alpha, x)
    assert abs(mittag_leffler(1, 2 - alpha, x) - ref) <= 1e-11 * abs(ref)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [0.1, 0.5, 1.0])
def test_mittag_leffler_imaginary_axis(alpha, x):
    z = 2j * math.pi * x
    ref = ml_oracle(1, 2 - alpha, z)
    assert abs(mittag_leffler(1, 2 - alpha, z) - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_mittag_leffler_decay_argument(alpha):
    for t in np.linspace(0, 1, 11):
        z = -(t**alpha)
        ref = ml_oracle(alpha, 1, z)
        assert abs(mittag_leffler(alpha, 1, z) - ref) <= 1e-13 * abs(ref)


def test_mittag_leffler_domain_and_failure():
    with pytest.raises(DomainError):
        mittag_leffler(0, 1, 1)
    with pytest.raises(DomainError):
        mittag_leffler(1, -1, 1)
    with pytest.raises(DomainError):
        mittag_leffler(1, 1, 60)
    with pytest.raises(NumericalError):
        mittag_leffler(0.5, 1, -50)


def test_mittag_leffler_flags_cancellation():
    # exp(-20) through the series loses every digit; refuse instead of returning noise
    with pytest.raises(NumericalError):
        mittag_leffler(1, 1, -20)
    assert mittag_leffler(1, 1, -5).real == pytest.approx(math.exp(-5), rel=1e-11)
