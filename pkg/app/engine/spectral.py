import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from app.engine.mode_solver import eig_sturm_liouville, solve_mode_bvp
from app.engine.radial_math import integrate_radial
from app.engine.state import (
    ModeSolution,
    RadialSteadyState,
    SpectrumReport,
    dirichlet,
    make_radial_function,
    state_summary,
)
from app.engine.steady import potential
from app.utils import DomainError, PositivityViolationError, validate_beta

logger = logging.getLogger(__name__)


def sigma_table(s: RadialSteadyState, n_max: int, l_max: int) -> np.ndarray:
    """sigma[n, l-1] = l-th eigenvalue of the mode-n linearization, n = 0..n_max.

    Raises:
        PositivityViolationError: some sigma with n >= 1 is not positive.
    """
    if n_max < 0 or l_max < 1:
        raise ValueError(f"need n_max >= 0 and l_max >= 1, got n_max={n_max}, l_max={l_max}")
    grid = s['phi']['grid']
    V = potential(s)
    table = np.array([eig_sturm_liouville(n, V, l_max, grid) for n in range(n_max + 1)])
    if n_max >= 1:
        bad = np.argwhere(table[1:] <= 0.0)
        if bad.size:
            n, k = bad[0]
            raise PositivityViolationError(
                f"positivity violation: sigma_{n + 1},{k + 1} = {table[n + 1, k]:.6g} <= 0 "
                f"at A={s['A']:g}, Lambda={s['lam']:.10g}")
    return table


def _zero_rhs(s: RadialSteadyState):
    grid = s['phi']['grid']
    return make_radial_function(grid, np.zeros(grid['N'] + 1))


def solve_h_mode(s: RadialSteadyState, l: int) -> ModeSolution:
    """h_l: homogeneous mode-l problem with h_l(0) = 0, h_l(R) = -Phi'(R)."""
    if l < 1:
        raise ValueError(f"h modes need l >= 1, got {l}")
    grid = s['phi']['grid']
    return solve_mode_bvp(l, potential(s), _zero_rhs(s), dirichlet(-s['dphi_R']), grid, kind='h')


def solve_phi_tilde(s: RadialSteadyState) -> ModeSolution:
    """Radial factor of the cos(phi) response to a unit translation of the disk."""
    grid = s['phi']['grid']
    V = potential(s)
    rhs = make_radial_function(grid, -V['values'] * grid['r'])
    return solve_mode_bvp(1, V, rhs, dirichlet(0.0), grid, kind='phi_tilde')


def solve_psi_mode(s: RadialSteadyState, l: int) -> ModeSolution:
    """psi_l = h_l + Phi', solved directly with forcing (l^2 - 1) Phi'/r^2."""
    if l < 2:
        raise ValueError(f"psi modes need l >= 2, got {l}")
    grid = s['phi']['grid']
    r = grid['r']
    forcing = np.zeros(grid['N'] + 1)
    forcing[1:] = (l * l - 1) * s['dphi']['values'][1:] / r[1:] ** 2
    return solve_mode_bvp(l, potential(s), make_radial_function(grid, forcing), dirichlet(0.0),
                          grid, kind='psi')


def exceptional_beta(s: RadialSteadyState, l: int, h: Optional[ModeSolution] = None) -> float:
    """beta_l = R^2 (h_l'(R) + Phi''(R)) / (l^2 - 1); E_l = 1 exactly at beta = beta_l."""
    if l < 2:
        raise ValueError(f"exceptional beta needs l >= 2, got {l}")
    h = h or solve_h_mode(s, l)
    return s['R'] ** 2 * (h['dprofile_R'] + s['d2phi_R']) / (l * l - 1)


def exceptional_beta_psi(s: RadialSteadyState, l: int, psi: Optional[ModeSolution] = None) -> float:
    psi = psi or solve_psi_mode(s, l)
    return s['R'] ** 2 * psi['dprofile_R'] / (l * l - 1)


def e01_left_side(s: RadialSteadyState) -> float:
    """pi * Lambda * int(e^Phi Phi' r^2 dr) / (R Phi'(R)) - pi.

    Equals pi * (phi_tilde'(R) - 1) and has the sign of the bifurcation functional.
    """
    if s['dphi_R'] == 0.0:
        raise DomainError("domain: Phi'(R) = 0, the traveling eigenvalues are undefined")
    grid = s['phi']['grid']
    weighted = s['lam'] * np.exp(s['phi']['values']) * s['dphi']['values']
    moment = integrate_radial(make_radial_function(grid, weighted), 2)
    return math.pi * moment / (s['R'] * s['dphi_R']) - math.pi


def traveling_eigs_E01(s: RadialSteadyState, beta: float) -> Tuple[complex, complex]:
    """Roots of L = beta (E - 1)^2 / R^4, ordered (E0, E1).

    Real pair E0 < 1 < E1 when L > 0, conjugate pair when L < 0.
    """
    validate_beta(beta)
    disc = s['R'] ** 4 * e01_left_side(s) / beta
    if disc >= 0.0:
        root = math.sqrt(disc)
        return complex(1.0 - root, 0.0), complex(1.0 + root, 0.0)
    root = math.sqrt(-disc)
    return complex(1.0, -root), complex(1.0, root)


def steady_eig_El(s: RadialSteadyState, beta: float, l: int,
                  h: Optional[ModeSolution] = None) -> float:
    validate_beta(beta)
    if l < 2:
        raise ValueError(f"E_l is defined for l >= 2, got {l}")
    h = h or solve_h_mode(s, l)
    return 1.0 / l ** 2 + s['R'] ** 2 * (h['dprofile_R'] + s['d2phi_R']) / (beta * l ** 2)


def comparison_exponent(s: RadialSteadyState, l: int) -> int:
    """Smallest l0 >= 0 making (r/R)^(l+l0) a subsolution of the h_l problem.

    Needs ((l+l0)^2 - l^2)/r^2 >= 1 - Lambda e^Phi on (0, R), i.e.
    l0^2 + 2 l l0 >= R^2 max(1 - Lambda e^Phi).
    """
    need = s['R'] ** 2 * max(0.0, float(np.max(1.0 - potential(s)['values'])))
    l0 = max(0, math.ceil(-l + math.sqrt(l * l + need)))
    while l0 * l0 + 2 * l * l0 < need:
        l0 += 1
    return l0


def spectrum_report(s: RadialSteadyState, beta: float, n_max: int, l_max: int) -> SpectrumReport:
    validate_beta(beta)
    if l_max < 2:
        raise ValueError(f"l_max must be >= 2, got {l_max}")
    sigma = sigma_table(s, n_max, l_max)
    if s['dphi_R'] == 0.0:
        logger.warning("trivial state: E01 is undefined and reported as null")
        E01 = None
    else:
        E01 = traveling_eigs_E01(s, beta)
    El: List[float] = []
    betas: List[float] = []
    for l in range(2, l_max + 1):
        h = solve_h_mode(s, l)
        El.append(steady_eig_El(s, beta, l, h))
        betas.append(exceptional_beta(s, l, h))
    return SpectrumReport(sigma=sigma, E01=E01, El=El, beta=beta, beta_exceptional=betas,
                          state=state_summary(s))
