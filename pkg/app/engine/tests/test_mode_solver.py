import mpmath as mp
import numpy as np
import pytest

from app.engine.mode_solver import (
    assemble_mode_operator,
    count_near_zero_eigenvalues,
    eig_sturm_liouville,
    richardson_correction,
    solve_mode_bvp,
)
from app.engine.state import constant_function, dirichlet, make_grid, make_radial_function, robin
from app.engine.steady import potential, solve_for_lambda
from app.utils import ResonantModeError


def _bessel_i2_profile(r: np.ndarray, R: float) -> np.ndarray:
    scale = float(mp.besseli(2, R))
    return np.array([float(mp.besseli(2, x)) for x in r]) / scale


def test_euler_solution_is_reproduced():
    grid = make_grid(1.0, 256)
    sol = solve_mode_bvp(2, constant_function(grid, 1.0), constant_function(grid, 0.0),
                         dirichlet(1.0), grid)
    assert np.allclose(sol['profile']['values'], grid['r'] ** 2, atol=1e-10)
    assert sol['dprofile_R'] == pytest.approx(2.0, rel=1e-8)
    assert sol['profile']['values'][0] == 0.0


def test_zero_data_gives_zero_mode(state_r4_a1):
    grid = state_r4_a1['phi']['grid']
    sol = solve_mode_bvp(1, potential(state_r4_a1), constant_function(grid, 0.0), dirichlet(0.0), grid)
    assert np.all(sol['profile']['values'] == 0.0)
    assert sol['dprofile_R'] == 0.0


def test_second_order_convergence():
    errors = []
    for N in (64, 128, 256):
        grid = make_grid(1.0, N)
        sol = solve_mode_bvp(2, constant_function(grid, 0.0), constant_function(grid, 0.0),
                             dirichlet(1.0), grid, extrapolate=False)
        exact = _bessel_i2_profile(grid['r'], 1.0)
        errors.append(np.max(np.abs(sol['profile']['values'] - exact)))
    assert errors[0] / errors[1] > 3.0
    assert errors[1] / errors[2] > 3.0


def test_extrapolated_profile_beats_plain_solve():
    grid = make_grid(1.0, 256)
    exact = _bessel_i2_profile(grid['r'], 1.0)
    zero = constant_function(grid, 0.0)
    plain = solve_mode_bvp(2, zero, zero, dirichlet(1.0), grid, extrapolate=False)
    refined = solve_mode_bvp(2, zero, zero, dirichlet(1.0), grid)
    plain_error = np.max(np.abs(plain['profile']['values'] - exact))
    refined_error = np.max(np.abs(refined['profile']['values'] - exact))
    assert refined_error < plain_error / 20.0
    assert refined['profile']['values'][-1] == 1.0


def test_richardson_correction_interpolates_odd_nodes():
    fine = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    coarse = np.array([0.0, 1.7, 4.0])
    corr = richardson_correction(fine, coarse)
    assert np.allclose(corr, [0.0, 0.05, 0.1, 0.05, 0.0])


def test_boundary_derivative_converges_under_refinement():
    coarse = make_grid(4.0, 512)
    fine = make_grid(4.0, 2048)
    slopes = []
    for grid in (coarse, fine):
        s = solve_for_lambda(4.0, 1.0, grid=grid)
        sol = solve_mode_bvp(2, potential(s), constant_function(grid, 0.0),
                             dirichlet(-s['dphi_R']), grid)
        slopes.append(sol['dprofile_R'])
    assert slopes[1] == pytest.approx(slopes[0], rel=1e-4)


def test_robin_condition_is_enforced():
    grid = make_grid(2.0, 128)
    sol = solve_mode_bvp(0, constant_function(grid, 1.0), constant_function(grid, 0.0),
                         robin(2.0, -4.0), grid)
    assert np.allclose(sol['profile']['values'], 2.0, atol=1e-9)
    assert sol['value_R'] == pytest.approx(2.0, abs=1e-9)
    assert sol['dprofile_R'] == pytest.approx(2.0 * sol['value_R'] - 4.0, abs=1e-12)


def test_resonant_mode_detected():
    grid = make_grid(1.0, 256)
    sigma = eig_sturm_liouville(0, constant_function(grid, 0.0), 1, grid)[0]
    shifted = constant_function(grid, sigma)
    with pytest.raises(ResonantModeError, match="resonant mode"):
        solve_mode_bvp(0, shifted, constant_function(grid, 1.0), dirichlet(0.0), grid)


def test_operator_rows_and_symmetrization():
    grid = make_grid(1.0, 64)
    op = assemble_mode_operator(0, constant_function(grid, 0.0), dirichlet(0.0), grid)
    assert op['first'] == 0 and op['last'] == 63
    assert op['upper'][0] == pytest.approx(-4.0 / grid['h'] ** 2)
    assert count_near_zero_eigenvalues(op) == 0


def test_eigenvalue_n1_zero_potential():
    grid = make_grid(1.0, 2048)
    sigma = eig_sturm_liouville(1, constant_function(grid, 0.0), 1, grid)[0]
    j11 = float(mp.besseljzero(1, 1))
    assert sigma == pytest.approx(1.0 + j11 ** 2, rel=1e-5)
    assert sigma == pytest.approx(15.68, abs=0.01)


def test_eigenvalue_n0_zero_potential():
    grid = make_grid(4.0, 2048)
    sigma = eig_sturm_liouville(0, constant_function(grid, 0.0), 1, grid)[0]
    assert sigma == pytest.approx(1.0 + (2.404825557695773 / 4.0) ** 2, rel=1e-6)
    assert sigma == pytest.approx(1.3615, abs=1e-4)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_eigenvalues_ascending_and_match_bessel_zeros(n):
    grid = make_grid(2.0, 1024)
    sigma = eig_sturm_liouville(n, constant_function(grid, 0.0), 4, grid)
    assert all(a < b for a, b in zip(sigma[:-1], sigma[1:]))
    for k, value in enumerate(sigma, start=1):
        exact = 1.0 + (float(mp.besseljzero(n, k)) / 2.0) ** 2
        assert value == pytest.approx(exact, rel=1e-3)


def test_eigenvalue_error_is_second_order():
    exact = 1.0 + float(mp.besseljzero(2, 1)) ** 2
    errors = []
    for N in (64, 128, 256):
        grid = make_grid(1.0, N)
        errors.append(abs(eig_sturm_liouville(2, constant_function(grid, 0.0), 1, grid)[0] - exact))
    assert errors[0] / errors[1] > 3.0
    assert errors[1] / errors[2] > 3.0


def test_eig_rejects_too_many_eigenvalues():
    grid = make_grid(1.0, 64)
    with pytest.raises(ValueError, match="k_max must be in"):
        eig_sturm_liouville(0, constant_function(grid, 0.0), 17, grid)


def test_potential_grid_mismatch_rejected():
    grid = make_grid(1.0, 64)
    other = make_grid(1.0, 128)
    with pytest.raises(ValueError, match="different from the solve grid"):
        solve_mode_bvp(1, constant_function(other, 0.0), constant_function(grid, 0.0),
                       dirichlet(0.0), grid)


def test_mode_profiles_are_read_only():
    grid = make_grid(1.0, 64)
    sol = solve_mode_bvp(1, constant_function(grid, 0.0), make_radial_function(grid, grid['r']),
                         dirichlet(0.0), grid)
    with pytest.raises(ValueError):
        sol['profile']['values'][3] = 1.0
