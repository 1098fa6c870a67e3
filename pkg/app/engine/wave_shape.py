"""Traveling-wave boundary shape near the bifurcation root.

The boundary is r = R + rho(phi) with

    rho = -V^2 S2(R)/Phi'(R) cos(2 phi) - V^3 S3(R)/Phi'(R) cos(3 phi) + O(V^4),

where S2 and S3 solve mode-2 and mode-3 Robin problems driven by phi_tilde.
No cos(phi) or constant term appears at this order, and Lambda_1 = 0.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from app.engine.mode_solver import solve_mode_bvp
from app.engine.params import SolverParams, get_default_params
from app.engine.radial_math import bessel_I, boundary_second_derivative
from app.engine.spectral import exceptional_beta, solve_phi_tilde
from app.engine.state import (
    Branch,
    ExpansionFields,
    ModeSolution,
    RadialSteadyState,
    WaveShape,
    make_radial_function,
    robin,
)
from app.engine.steady import potential
from app.utils import DomainError, ExceptionalBetaError, ValidityCapError, validate_beta

logger = logging.getLogger(__name__)


def _zero_mode(s: RadialSteadyState, l: int, kind: str) -> ModeSolution:
    grid = s['phi']['grid']
    zeros = make_radial_function(grid, np.zeros(grid['N'] + 1))
    return ModeSolution(l=l, kind=kind, profile=zeros, dprofile_R=0.0, value_R=0.0)


def _guard_exceptional(root: RadialSteadyState, beta: float, l: int, guard: float) -> None:
    beta_l = exceptional_beta(root, l)
    if abs(beta - beta_l) < guard:
        raise ExceptionalBetaError(
            f"exceptional beta: beta={beta:.10g} is within {guard:g} of beta_{l}={beta_l:.10g}")


def solve_S2(root: RadialSteadyState, beta: float, phi_tilde: ModeSolution,
             params: Optional[SolverParams] = None) -> ModeSolution:
    params = params or get_default_params()
    validate_beta(beta)
    if root['lam'] == 0.0:
        return _zero_mode(root, 2, 'S2')
    _guard_exceptional(root, beta, 2, params['exceptional_guard'])
    grid = root['phi']['grid']
    V = potential(root)
    shifted = phi_tilde['profile']['values'] - grid['r']
    rhs = make_radial_function(grid, 0.25 * V['values'] * shifted ** 2)
    c = (root['d2phi_R'] - 3.0 * beta / root['R'] ** 2) / root['dphi_R']
    return solve_mode_bvp(2, V, rhs, robin(c), grid, kind='S2')


def solve_S3(root: RadialSteadyState, beta: float, phi_tilde: ModeSolution, S2: ModeSolution,
             params: Optional[SolverParams] = None) -> ModeSolution:
    params = params or get_default_params()
    validate_beta(beta)
    if root['lam'] == 0.0:
        return _zero_mode(root, 3, 'S3')
    _guard_exceptional(root, beta, 3, params['exceptional_guard'])
    grid = root['phi']['grid']
    R, dR = root['R'], root['dphi_R']
    V = potential(root)
    shifted = phi_tilde['profile']['values'] - grid['r']
    forcing = (0.5 * V['values'] * shifted * S2['profile']['values']
               + V['values'] * shifted ** 3 / 24.0)
    d2_phi_tilde = boundary_second_derivative(phi_tilde['profile']['values'], grid['h'])
    c = (root['d2phi_R'] - 8.0 * beta / R ** 2) / dR
    d = (d2_phi_tilde - 2.0 / R) / (2.0 * dR) * S2['value_R']
    return solve_mode_bvp(3, V, make_radial_function(grid, forcing), robin(c, d), grid, kind='S3')


def expansion_fields(root: RadialSteadyState, beta: float, sensitivity: Optional[float] = None,
                     params: Optional[SolverParams] = None) -> ExpansionFields:
    """phi_tilde, S2, S3 at the root.

    Lambda_1 vanishes as long as d(phi_tilde'(R))/dLambda != 0 at the root;
    pass `sensitivity` to have that checked.
    """
    if sensitivity is not None and not sensitivity > 0.0:
        raise ValueError(f"d phi_tilde'(R)/dLambda must be positive at the root, got {sensitivity}")
    phi_tilde = solve_phi_tilde(root)
    S2 = solve_S2(root, beta, phi_tilde, params)
    S3 = solve_S3(root, beta, phi_tilde, S2, params)
    return ExpansionFields(phi_tilde=phi_tilde, S2=S2, S3=S3, lambda1=0.0, sensitivity=sensitivity)


def shape(root: RadialSteadyState, beta: float, V: float, samples: int = 720,
          params: Optional[SolverParams] = None,
          fields: Optional[ExpansionFields] = None) -> WaveShape:
    """Boundary r = R + rho(phi) sampled at phi_k = 2 pi k / samples.

    Raises:
        ValidityCapError: |V| above the expansion's validity cap.
        DomainError: Phi'(R) = 0 (trivial state).
    """
    params = params or get_default_params()
    validate_beta(beta)
    if abs(V) > params['v_cap']:
        raise ValidityCapError(f"validity cap: |V|={abs(V):g} exceeds {params['v_cap']:g}")
    if int(samples) != samples or samples < 8:
        raise ValueError(f"samples must be an integer >= 8, got {samples}")
    dR = root['dphi_R']
    if dR == 0.0:
        raise DomainError("domain: Phi'(R) = 0, the shape expansion is undefined")
    fields = fields or expansion_fields(root, beta, params=params)
    R = root['R']
    rho2 = -fields['S2']['value_R'] / dR
    rho3 = -fields['S3']['value_R'] / dR
    phi = 2.0 * math.pi * np.arange(int(samples)) / samples
    radius = R + V ** 2 * rho2 * np.cos(2.0 * phi) + V ** 3 * rho3 * np.cos(3.0 * phi)
    return WaveShape(
        R=R, V=V, beta=beta, rho2=rho2, rho3=rho3, lambda0=beta / R - dR,
        phi=phi, radius=radius, boundary=np.column_stack([phi, radius]),
    )


def fourier_projection(wave: WaveShape, k: int) -> float:
    """Mean of rho(phi) cos(k phi) over the samples."""
    rho = wave['radius'] - wave['R']
    return float(np.mean(rho * np.cos(k * wave['phi'])))


def area_defect(wave: WaveShape) -> float:
    """(1/2) * closed integral of (R + rho)^2 dphi - pi R^2, trapezoidal on the periodic samples."""
    return float(math.pi * np.mean(wave['radius'] ** 2) - math.pi * wave['R'] ** 2)


def lambda_sensitivity(branch: Branch) -> List[float]:
    """Centered differences of phi_tilde'(R) in Lambda along the minimal sub-branch."""
    minimal = branch['points'][:branch['minimal_index'] + 1]
    if len(minimal) < 3:
        raise ValueError(
            f"lambda_sensitivity needs >= 3 minimal-branch points, got {len(minimal)}")
    slopes = [solve_phi_tilde(s)['dprofile_R'] for s in minimal]
    lams = [s['lam'] for s in minimal]
    return [(slopes[k + 1] - slopes[k - 1]) / (lams[k + 1] - lams[k - 1])
            for k in range(1, len(minimal) - 1)]


def small_lambda_sensitivity_limit(R: float) -> float:
    """Lambda -> 0 limit of d phi_tilde'(R)/dLambda: R I0(R)/I1(R) - 2."""
    return R * bessel_I(0, R) / bessel_I(1, R) - 2.0
