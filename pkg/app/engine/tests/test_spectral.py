import math

import numpy as np
import pytest

from app.engine import spectral
from app.engine.radial_math import dirichlet_bessel_zero
from app.engine.spectral import (
    comparison_exponent,
    e01_left_side,
    exceptional_beta,
    exceptional_beta_psi,
    sigma_table,
    solve_h_mode,
    solve_phi_tilde,
    solve_psi_mode,
    spectrum_report,
    steady_eig_El,
    traveling_eigs_E01,
)
from app.engine.state import zero_state
from app.utils import DomainError, PositivityViolationError


@pytest.fixture(scope="module")
def trivial_r4(grid_r4):
    return zero_state(grid_r4)


def test_sigma_table_trivial_state(trivial_r4):
    table = sigma_table(trivial_r4, 2, 3)
    assert table.shape == (3, 3)
    j11 = dirichlet_bessel_zero(1, 1)
    assert table[1, 0] == pytest.approx(1.0 + (j11 / 4.0) ** 2, rel=1e-5)
    assert table[1, 0] == pytest.approx(1.9177, abs=1e-4)


def test_sigma_positive_and_increasing_in_n(sampled_points):
    for s in sampled_points:
        table = sigma_table(s, 4, 4)
        assert np.all(table[1:] > 0.0)
        assert np.all(np.diff(table, axis=0) > 0.0)
        assert np.all(np.diff(table, axis=1) > 0.0)


def test_sigma_table_rejects_nonpositive_entries(monkeypatch, state_r4_a1):
    monkeypatch.setattr(spectral, 'eig_sturm_liouville',
                        lambda n, V, k, grid: [-1.0 if n == 2 else 1.0] * k)
    with pytest.raises(PositivityViolationError, match="positivity violation"):
        sigma_table(state_r4_a1, 3, 2)


def test_h_mode_vanishes_on_trivial_state(trivial_r4):
    h = solve_h_mode(trivial_r4, 3)
    assert np.all(h['profile']['values'] == 0.0)


def test_h1_equals_minus_dphi(sampled_points):
    for s in sampled_points:
        h1 = solve_h_mode(s, 1)['profile']['values']
        assert np.max(np.abs(h1 + s['dphi']['values'])) < 1e-4


def test_h1_equals_minus_dphi_on_steep_profiles(branch_r4):
    for s in branch_r4['points'][-4:]:
        h1 = solve_h_mode(s, 1)['profile']['values']
        assert np.max(np.abs(h1 + s['dphi']['values'])) < 1e-4


def test_comparison_exponent_trivial_state(trivial_r4):
    assert comparison_exponent(trivial_r4, 2) == 3
    assert comparison_exponent(trivial_r4, 10) == 1


@pytest.mark.parametrize("l", [2, 3, 5])
def test_h_mode_above_power_subsolution(state_r4_a1, l):
    s = state_r4_a1
    l0 = comparison_exponent(s, l)
    r = s['phi']['grid']['r']
    bound = -s['dphi_R'] * (r / s['R']) ** (l + l0)
    h = solve_h_mode(s, l)['profile']['values']
    assert np.all(h >= bound - 1e-6)


def test_phi_tilde_trivial_state(trivial_r4):
    assert np.all(solve_phi_tilde(trivial_r4)['profile']['values'] == 0.0)


def test_phi_tilde_slope_matches_moment(sampled_points):
    for s in sampled_points:
        if abs(s['dphi_R']) < 0.01:
            continue
        slope = solve_phi_tilde(s)['dprofile_R']
        assert slope == pytest.approx(1.0 + e01_left_side(s) / math.pi, rel=1e-4)


def test_psi_equals_h_plus_dphi(state_r4_a1):
    s = state_r4_a1
    for l in (2, 3, 4):
        psi = solve_psi_mode(s, l)['profile']['values']
        h = solve_h_mode(s, l)['profile']['values']
        assert np.max(np.abs(psi - (h + s['dphi']['values']))) <= 1e-4


def test_psi_negative_and_ordered(minimal_points):
    for s in minimal_points[::8]:
        scaled = [solve_psi_mode(s, l)['profile']['values'][1:-1] / (l * l - 1) for l in (2, 3, 4)]
        assert all(np.all(p < 0.0) for p in scaled)
        assert np.all(scaled[0] < scaled[1])
        assert np.all(scaled[1] < scaled[2])


def test_psi_rejects_low_modes(state_r4_a1):
    with pytest.raises(ValueError, match="l >= 2"):
        solve_psi_mode(state_r4_a1, 1)


def test_exceptional_beta_trivial_state(trivial_r4):
    assert all(exceptional_beta(trivial_r4, l) == 0.0 for l in range(2, 7))


@pytest.mark.parametrize("l", [2, 3, 4, 6])
def test_exceptional_beta_forms_agree(state_r4_a1, l):
    assert exceptional_beta(state_r4_a1, l) == pytest.approx(exceptional_beta_psi(state_r4_a1, l), rel=1e-6)


def test_exceptional_beta_decays_like_inverse_l(state_r4_a1):
    betas = {l: exceptional_beta(state_r4_a1, l) for l in range(2, 21)}
    assert all(b > 0.0 for b in betas.values())
    c_short = max(l * betas[l] for l in range(2, 11))
    c_long = max(l * betas[l] for l in range(2, 21))
    assert c_long <= 1.5 * c_short
    assert betas[20] < betas[2]


def test_e01_undefined_on_trivial_state(trivial_r4):
    with pytest.raises(DomainError, match="domain"):
        traveling_eigs_E01(trivial_r4, 0.625)


def test_e01_rejects_nonpositive_beta(state_r4_a1):
    with pytest.raises(DomainError, match="domain: beta"):
        traveling_eigs_E01(state_r4_a1, 0.0)


def test_e01_pair_structure(sampled_points):
    for s in sampled_points:
        E0, E1 = traveling_eigs_E01(s, 0.625)
        if e01_left_side(s) > 0:
            assert E0.imag == 0.0 and E1.imag == 0.0
            assert E0.real < 1.0 < E1.real
        else:
            assert E0 == E1.conjugate()
            assert E0.real == 1.0


def test_El_trivial_state(trivial_r4):
    for l in range(2, 7):
        assert steady_eig_El(trivial_r4, 0.625, l) == pytest.approx(1.0 / l ** 2, abs=1e-15)


@pytest.mark.parametrize("l", [2, 3, 5])
def test_El_equals_one_at_exceptional_beta(state_r4_a1, l):
    h = solve_h_mode(state_r4_a1, l)
    beta_l = exceptional_beta(state_r4_a1, l, h)
    assert steady_eig_El(state_r4_a1, beta_l, l, h) == pytest.approx(1.0, abs=1e-8)


def test_El_bound_holds_with_one_constant(state_r4_a1):
    betas = (0.1, 0.625, 5.0)
    h = {l: solve_h_mode(state_r4_a1, l) for l in range(2, 21)}
    ratios = {(beta, l): steady_eig_El(state_r4_a1, beta, l, h[l]) / (1.0 / (beta * l) + 1.0 / l ** 2)
              for beta in betas for l in h}
    C = max(ratio for (beta, l), ratio in ratios.items() if l <= 10)
    for beta in betas:
        for l in h:
            bound = 1.5 * C * (1.0 / (beta * l) + 1.0 / l ** 2)
            assert steady_eig_El(state_r4_a1, beta, l, h[l]) <= bound


def test_El_increases_along_minimal_branch(minimal_points):
    picks = minimal_points[::4]
    for l in (2, 3):
        values = [steady_eig_El(s, 0.625, l) for s in picks]
        assert all(a < b for a, b in zip(values[:-1], values[1:]))


def test_spectrum_report_trivial_state(trivial_r4):
    report = spectrum_report(trivial_r4, 0.625, 2, 4)
    assert report['E01'] is None
    assert report['El'] == pytest.approx([1 / 4, 1 / 9, 1 / 16], abs=1e-15)
    assert report['beta_exceptional'] == [0.0, 0.0, 0.0]
    assert report['sigma'].shape == (3, 4)


def test_spectrum_report_branch_state(state_r4_a1):
    report = spectrum_report(state_r4_a1, 0.625, 4, 6)
    assert np.all(report['sigma'][1:] > 0.0)
    assert len(report['El']) == 5
    assert len(report['beta_exceptional']) == 5
    assert report['E01'] is not None
    assert report['state']['A'] == 1.0


def test_spectrum_report_needs_two_modes(state_r4_a1):
    with pytest.raises(ValueError, match="l_max must be >= 2"):
        spectrum_report(state_r4_a1, 0.625, 2, 1)
