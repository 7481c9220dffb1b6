import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracapprox import DomainError, NumericalError
from fracapprox.specfun import gamma, mittag_leffler
from fracapprox.subdiffusion import (
    SpaceTimeGrid,
    SubdiffusionProblem,
    TridiagonalSystem,
    assemble_step,
    example_1,
    example_2,
    first_layer,
    regularize_example_2,
    solve,
    thomas_solve,
)
from fracapprox.weights import mid_sigma_weights


def random_dominant_system(rng, n, margin=0.1):
    lower = rng.uniform(-1, 1, n)
    upper = rng.uniform(-1, 1, n)
    lower[0] = upper[-1] = 0.0
    diag = (np.abs(lower) + np.abs(upper) + margin) * rng.choice([-1, 1], n)
    return TridiagonalSystem(lower, diag, upper, np.zeros(n))


def zero_problem():
    return SubdiffusionProblem(
        D=1.0,
        source=lambda x, t: np.zeros_like(x),
        u0=lambda x: np.zeros_like(x),
        uL=lambda t: 0.0,
        uR=lambda t: 0.0,
        exact=lambda x, t: np.zeros_like(x),
    )


# -- grid and Thomas ----------------------------------------------------------


def test_grid_validation():
    g = SpaceTimeGrid(40, 80, T=2.0)
    assert g.h == 1 / 40 and g.tau == 2.0 / 80
    assert g.interior[0] == pytest.approx(0.025) and len(g.interior) == 39
    with pytest.raises(DomainError):
        SpaceTimeGrid(1, 10)
    with pytest.raises(DomainError):
        SpaceTimeGrid(10, 10, T=0.0)


def test_thomas_identity():
    rhs = np.arange(5.0)
    sys = TridiagonalSystem(np.zeros(5), np.ones(5), np.zeros(5), rhs)
    assert np.array_equal(thomas_solve(sys), rhs)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), st.integers(0, 2**32 - 1))
def test_thomas_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    sys = random_dominant_system(rng, n)
    x_star = rng.uniform(-1, 1, n)
    sys.rhs = sys.matvec(x_star)
    x = thomas_solve(sys)
    assert np.max(np.abs(x - x_star)) <= 1e-11
    assert np.max(np.abs(sys.matvec(x) - sys.rhs)) <= 1e-10 * max(np.max(np.abs(sys.rhs)), 1e-300)


def test_thomas_matches_dense_solver():
    rng = np.random.default_rng(7)
    sys = random_dominant_system(rng, 30)
    sys.rhs = rng.normal(size=30)
    assert np.allclose(thomas_solve(sys), np.linalg.solve(sys.dense(), sys.rhs), rtol=1e-12, atol=1e-13)


def test_thomas_errors():
    with pytest.raises(NumericalError):
        thomas_solve(TridiagonalSystem(np.zeros(2), np.array([0.0, 1.0]), np.zeros(2), np.ones(2)))
    with pytest.raises(DomainError):
        thomas_solve(TridiagonalSystem(np.zeros(2), np.ones(3), np.zeros(2), np.ones(2)))


# -- assembly -----------------------------------------------------------------


def test_assemble_zero_data():
    g = SpaceTimeGrid(10, 10)
    sys = assemble_step(0.5, g, 1.0, np.zeros((3, 9)), lambda x, t: np.zeros_like(x), 0.0, 0.0, 3)
    assert np.all(sys.rhs == 0)


def test_assemble_structure():
    a = 0.5
    g = SpaceTimeGrid(40, 40)
    sys = assemble_step(a, g, 1.0, np.zeros((2, 39)), np.zeros(39), 0.0, 0.0, 2)
    eta = gamma(0.5) * 0.025**0.5 / 0.025**2
    assert eta == pytest.approx(448.399, abs=1e-3)
    assert sys.diag[0] == pytest.approx(mid_sigma_weights(a, 2).weights[0] + 2 * eta)
    assert sys.upper[0] == pytest.approx(-eta)
    sigma0 = mid_sigma_weights(a, 2).weights[0]
    row_sums = sys.diag[1:-1] + sys.lower[1:-1] + sys.upper[1:-1]
    assert np.allclose(row_sums, sigma0, rtol=1e-12)


def test_assemble_history_shape():
    g = SpaceTimeGrid(10, 10)
    with pytest.raises(DomainError):
        assemble_step(0.5, g, 1.0, np.zeros((2, 9)), np.zeros(9), 0.0, 0.0, 3)
    with pytest.raises(DomainError):
        assemble_step(0.5, g, 1.0, np.zeros((1, 9)), np.zeros(9), 0.0, 0.0, 1)


def test_assemble_rhs_formula():
    a, m = 0.4, 4
    g = SpaceTimeGrid(8, 8)
    rng = np.random.default_rng(3)
    history = rng.normal(size=(m, 7))
    f = rng.normal(size=7)
    sys = assemble_step(a, g, 2.0, history, f, 1.5, -0.5, m)
    w = mid_sigma_weights(a, m).weights
    eta = gamma(1 - a) * 2.0 * g.tau**a / g.h**2
    expected = -sum(w[k] * history[m - k] for k in range(1, m + 1)) + gamma(1 - a) * g.tau**a * f
    expected[0] += eta * 1.5
    expected[-1] += eta * -0.5
    assert np.allclose(sys.rhs, expected, rtol=1e-13)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.75, 0.9])
@pytest.mark.parametrize("N", [4, 16, 40])
def test_inverse_norm_bound(alpha, N):
    g = SpaceTimeGrid(N, N)
    for m in (2, 5, N):
        sys = assemble_step(alpha, g, 1.0, np.zeros((m, N - 1)), np.zeros(N - 1), 0.0, 0.0, m)
        assert np.all(np.abs(sys.diag) > np.abs(sys.lower) + np.abs(sys.upper))
        cols = []
        for j in range(N - 1):
            e = np.zeros(N - 1)
            e[j] = 1.0
            sys.rhs = e
            cols.append(thomas_solve(sys))
        inv_norm = np.max(np.sum(np.abs(np.array(cols).T), axis=1))
        sigma0 = mid_sigma_weights(alpha, m).weights[0]
        assert inv_norm <= 1 / sigma0 + 1e-9


# -- first layer and full solve -----------------------------------------------


def test_first_layer_stationary_linear():
    g = SpaceTimeGrid(20, 20)
    x = g.interior
    u0 = 0.3 + 2.0 * x
    layer = first_layer(0.5, g, 1.0, u0, lambda x, t: np.zeros_like(x), 0.3, 2.3)
    assert np.allclose(layer, u0, atol=1e-12)


def test_zero_problem_gives_zero_field():
    res = solve(zero_problem(), 0.5, SpaceTimeGrid(10, 10))
    assert np.all(res.U == 0) and res.error == 0


def test_solve_final_time_mismatch():
    with pytest.raises(DomainError):
        solve(example_1(0.5), 0.5, SpaceTimeGrid(10, 10, T=2.0))


def test_example_1_data():
    p = example_1(0.5)
    assert p.source(np.array([0.0]), 0.0)[0] == pytest.approx(-1.0)
    assert p.exact(0.0, 0.0) == 1.0
    assert p.exact(1.0, 1.0) == pytest.approx(math.e**2)
    assert p.u0(0.0) == p.uL(0.0) and p.u0(1.0) == pytest.approx(p.uR(0.0))


def test_example_1_source_is_consistent():
    # D^a_t e^(x+t) - e^(x+t) at one point, by quadrature
    a, x, t = 0.5, 0.3, 0.8
    mpmath.mp.dps = 30
    caputo = mpmath.quad(lambda u: mpmath.exp(t - u ** (1 / (1 - a))), [0, t ** (1 - a)]) / (1 - a) / mpmath.gamma(1 - a)
    expected = float(mpmath.exp(x) * caputo) - math.exp(x + t)
    assert example_1(a).source(np.array([x]), t)[0] == pytest.approx(expected, rel=1e-12)


def test_example_1_first_layer_accuracy():
    a = 0.5
    g = SpaceTimeGrid(40, 40)
    p = example_1(a)
    layer = first_layer(a, g, p.D, p.u0(g.interior), p.source, p.uL(g.tau), p.uR(g.tau))
    assert np.max(np.abs(layer - p.exact(g.interior, g.tau))) < g.tau ** (2 - a)


def test_example_2_data():
    p = example_2(0.5)
    assert p.exact(0.5, 0.0) == pytest.approx(1.0)
    assert p.u0(0.0) == 0.0
    for t in np.linspace(0, 1, 11):
        assert p.exact(0.5, t) > 0


def test_example_2_stays_bounded():
    res = solve(example_2(0.5), 0.5, SpaceTimeGrid(40, 40), keep_layers=True)
    assert np.all(np.abs(res.layers) <= 1.001)


def test_error_bound_shape():
    # error / (tau^(2-a) + h^2) stays bounded under refinement
    a = 0.5
    scaled = []
    for N in (20, 40, 80, 160, 320):
        err = solve(example_1(a), a, SpaceTimeGrid(N, N)).error
        scaled.append(err / ((1 / N) ** (2 - a) + (1 / N) ** 2))
    assert max(scaled) / min(scaled) < 1.5


# -- regularization -----------------------------------------------------------


def test_regularize_validation():
    with pytest.raises(DomainError):
        regularize_example_2(0.5, 0)
    with pytest.raises(DomainError):
        regularize_example_2(0.5, 2.5)
    with pytest.warns(UserWarning):
        regularize_example_2(0.75, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        regularize_example_2(0.5, 4)


@pytest.mark.parametrize("alpha, m", [(0.25, 8), (0.5, 4)])
def test_regularized_problem_identities(alpha, m):
    p, recover = regularize_example_2(alpha, m)
    x = np.linspace(0, 1, 7)
    assert np.allclose(p.exact(x, 0.0), 0.0, atol=1e-15)
    for t in (0.1, 0.5, 1.0):
        u = np.sin(np.pi * x) * mittag_leffler(alpha, 1, -(t**alpha)).real
        assert np.allclose(recover(x, t, p.exact(x, t)), u, atol=1e-12)


def test_regularized_source_matches_residual():
    # D^a v - D v_xx equals the stated source, using the power-function derivative per term
    a, m = 0.5, 4
    p, _ = regularize_example_2(a, m)
    x, t = 0.3, 0.7
    # v = sin(pi x) (E - P_m); D^a E(-t^a) = -E(-t^a); D^a t^(na) = Gamma(na+1)/Gamma(na+1-a) t^((n-1)a)
    E = mittag_leffler(a, 1, -(t**a)).real
    dP = sum((-1) ** n * t ** ((n - 1) * a) / gamma((n - 1) * a + 1) for n in range(1, m + 1))
    Pm = sum((-1) ** n * t ** (n * a) / gamma(n * a + 1) for n in range(m + 1))
    s = math.sin(math.pi * x)
    lhs = s * (-E - dP) + s * (E - Pm)  # D^a v - (1/pi^2) v_xx with v_xx = -pi^2 v
    assert p.source(np.array([x]), t)[0] == pytest.approx(lhs, rel=1e-12)


@pytest.mark.parametrize("alpha, m, unreg", [(0.25, 8, 8.8407e-4), (0.5, 4, 1.85912e-3), (0.75, 2, 3.43405e-3)])
def test_regularization_reduces_error(alpha, m, unreg):
    g = SpaceTimeGrid(40, 40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p, _ = regularize_example_2(alpha, m)
    assert solve(p, alpha, g).error < solve(example_2(alpha), alpha, g).error
    assert solve(example_2(alpha), alpha, g).error == pytest.approx(unreg, rel=1e-3)
