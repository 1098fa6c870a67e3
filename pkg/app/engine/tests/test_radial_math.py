import math

import mpmath as mp
import numpy as np
import pytest

from app.engine.radial_math import (
    _bessel_asymptotic,
    _bessel_series,
    bessel_I,
    bessel_I_values,
    boundary_derivative,
    boundary_second_derivative,
    find_root_bracketed,
    integrate_radial,
    solve_radial_ivp,
)
from app.engine.state import RadialFunction, make_grid, make_radial_function
from app.utils import DomainError, GridParityError, InvalidDataError, NoBracketError, ProfileBlowupError


def test_integrate_constant_times_r():
    grid = make_grid(4.0, 64)
    f = make_radial_function(grid, np.ones(65))
    assert integrate_radial(f, 1) == pytest.approx(8.0, rel=1e-14)


def test_integrate_r_squared_times_r():
    grid = make_grid(1.0, 64)
    f = make_radial_function(grid, grid['r'] ** 2)
    assert integrate_radial(f, 1) == pytest.approx(0.25, rel=1e-13)


@pytest.mark.parametrize("power", [0, 1, 2, 3])
def test_integrate_exact_for_cubics(power):
    R = 2.5
    grid = make_grid(R, 128)
    f = make_radial_function(grid, np.ones(129))
    assert integrate_radial(f, power) == pytest.approx(R ** (power + 1) / (power + 1), rel=1e-13)


def test_integrate_bessel_moment():
    grid = make_grid(1.0, 2048)
    f = make_radial_function(grid, bessel_I_values(0, grid['r']))
    expected = float(mp.besseli(1, 1))
    assert integrate_radial(f, 1) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.5651591, abs=1e-7)


def test_integrate_odd_grid_rejected():
    grid = make_grid(1.0, 65)
    f = make_radial_function(grid, np.ones(66))
    with pytest.raises(GridParityError, match="grid parity"):
        integrate_radial(f, 1)


def test_integrate_non_finite_rejected():
    grid = make_grid(1.0, 64)
    values = np.ones(65)
    values[10] = np.nan
    f = RadialFunction(grid=grid, values=values)
    with pytest.raises(InvalidDataError, match="invalid data"):
        integrate_radial(f, 0)


def test_bessel_values_at_zero():
    assert bessel_I(0, 0.0) == 1.0
    assert bessel_I(1, 0.0) == 0.0


def test_bessel_I0_at_one():
    assert bessel_I(0, 1.0) == pytest.approx(1.26606587775201, rel=1e-13)


@pytest.mark.parametrize("x", [0.1, 0.5, 2.0, 7.5, 14.9, 15.0, 20.0, 50.0, 120.0, 400.0, 690.0])
@pytest.mark.parametrize("order", [0, 1])
def test_bessel_matches_mpmath(order, x):
    expected = float(mp.besseli(order, x))
    assert bessel_I(order, x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("order", [0, 1])
def test_bessel_branches_meet_at_switch(order):
    series = _bessel_series(order, 15.0)
    asymptotic = _bessel_asymptotic(order, 15.0)
    assert asymptotic == pytest.approx(series, rel=1e-11)


def test_bessel_derivative_identity():
    delta = 1e-5
    for x in np.linspace(0.1, 10.0, 25):
        derivative = (bessel_I(0, x + delta) - bessel_I(0, x - delta)) / (2 * delta)
        assert derivative == pytest.approx(bessel_I(1, x), rel=1e-8)


@pytest.mark.parametrize("order,x", [(0, -1.0), (1, 700.5), (2, 1.0), (0, float('nan'))])
def test_bessel_domain(order, x):
    with pytest.raises(DomainError, match="domain"):
        bessel_I(order, x)


def test_find_root_sqrt_two():
    root = find_root_bracketed(lambda x: x * x - 2.0, 1.0, 2.0, 1e-12)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-11)


def test_find_root_bessel():
    root = find_root_bracketed(lambda x: bessel_I(0, x) - 2.0, 0.0, 3.0, 1e-12)
    expected = float(mp.findroot(lambda t: mp.besseli(0, t) - 2, 1.7))
    assert root == pytest.approx(expected, abs=1e-10)
    assert root == pytest.approx(1.80790, abs=1e-5)


def test_find_root_linear():
    assert find_root_bracketed(lambda x: x, -1.0, 1.0, 1e-12) == pytest.approx(0.0, abs=1e-11)


def test_find_root_without_sign_change():
    with pytest.raises(NoBracketError, match="no bracket"):
        find_root_bracketed(lambda x: x * x + 1.0, -1.0, 1.0, 1e-12)


def test_ivp_zero_solution():
    grid = make_grid(4.0, 256)
    ivp = solve_radial_ivp(0.0, 0.0, grid, 1e-10)
    assert np.all(ivp['q']['values'] == 0.0)
    assert ivp['q_prime_R'] == 0.0


def test_ivp_constant_solution():
    grid = make_grid(4.0, 256)
    ivp = solve_radial_ivp(math.exp(-1.0), 1.0, grid, 1e-10)
    assert np.allclose(ivp['q']['values'], 1.0, atol=1e-9)
    assert abs(ivp['q_prime_R']) < 1e-9


def test_ivp_linear_case_is_bessel():
    grid = make_grid(1.0, 256)
    ivp = solve_radial_ivp(0.0, 1.0, grid, 1e-12)
    assert ivp['q']['values'][-1] == pytest.approx(1.26606587775201, rel=1e-9)
    assert np.allclose(ivp['q']['values'], bessel_I_values(0, grid['r']), rtol=1e-9)
    assert ivp['q_prime_R'] == pytest.approx(bessel_I(1, 1.0), rel=1e-9)
    assert np.allclose(ivp['dq']['values'], bessel_I_values(1, grid['r']), rtol=1e-8, atol=1e-12)


def test_ivp_tolerance_halving_is_consistent():
    grid = make_grid(4.0, 256)
    tol = 1e-8
    q1 = solve_radial_ivp(0.3, 1.0, grid, tol)['q']['values'][-1]
    q2 = solve_radial_ivp(0.3, 1.0, grid, tol / 2)['q']['values'][-1]
    assert abs(q1 - q2) < 10 * tol


def test_ivp_blowup_reports_sign():
    grid = make_grid(4.0, 256)
    with pytest.raises(ProfileBlowupError, match="profile blow-up") as excinfo:
        solve_radial_ivp(0.0, 10.0, grid, 1e-8)
    assert excinfo.value.sign == 1.0
    assert 0.0 < excinfo.value.radius < 4.0


@pytest.mark.parametrize("tol", [1e-3, 1e-15])
def test_ivp_rejects_tolerance(tol):
    with pytest.raises(ValueError, match="tol must lie in"):
        solve_radial_ivp(0.1, 1.0, make_grid(1.0, 64), tol)


def test_boundary_stencils_exact_for_low_degree():
    grid = make_grid(2.0, 64)
    r = grid['r']
    assert boundary_derivative(r ** 3, grid['h']) == pytest.approx(12.0, rel=1e-10)
    assert boundary_second_derivative(r ** 4, grid['h']) == pytest.approx(48.0, rel=1e-9)
