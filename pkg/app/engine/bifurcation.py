"""Traveling-wave and non-radial bifurcation points on the radial branch."""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from typing_extensions import TypedDict

from app.engine.params import SolverParams, get_default_params
from app.engine.radial_math import bessel_I, bessel_I_values, find_root_bracketed, integrate_radial
from app.engine.spectral import (
    exceptional_beta,
    exceptional_beta_psi,
    solve_phi_tilde,
    traveling_eigs_E01,
)
from app.engine.state import (
    BifurcationReport,
    Branch,
    NonradialCurve,
    RadialFunction,
    RadialSteadyState,
    make_grid,
    make_radial_function,
    zero_state,
)
from app.engine.steady import lambda_upper_bound, solve_for_lambda
from app.utils import ExtendBranchError, ResonantModeError, validate_beta, validate_radius

logger = logging.getLogger(__name__)

THETA = math.sqrt(1.0 - math.exp(-1.0))


class BesselLemma(TypedDict):
    R: float
    J: float  # closed form
    J_quadrature: float
    w: RadialFunction


def bifurcation_functional(s: RadialSteadyState) -> Tuple[float, float, float]:
    """The traveling-wave condition R Phi'(R) = Lambda int(e^Phi Phi' r^2) in three equivalent forms."""
    grid = s['phi']['grid']
    R, lam, dR = s['R'], s['lam'], s['dphi_R']
    phi = s['phi']['values']
    e_phi = np.exp(phi)

    def integral(values: np.ndarray, power: int) -> float:
        return integrate_radial(make_radial_function(grid, values), power)

    B1 = R * dR - lam * integral(e_phi * s['dphi']['values'], 2)
    B2 = integral(phi, 1) - lam * R * R + lam * integral(e_phi, 1)
    B3 = R * dR + 0.5 * (R * dR) ** 2 + integral(phi * phi, 1)
    return B1, B2, B3


def _neighbour_hint(left: RadialSteadyState, right: RadialSteadyState) -> Tuple[float, float]:
    margin = 0.05 * lambda_upper_bound(left['R'])
    lo, hi = sorted((left['lam'], right['lam']))
    return lo - margin, hi + margin


def _refine_start(R: float, first: RadialSteadyState, tol: float,
                  params: SolverParams, halvings: int = 20) -> RadialSteadyState:
    """A state below `first` on the branch where B1 is negative, by halving A."""
    grid = first['phi']['grid']
    A = first['A']
    for _ in range(halvings):
        A *= 0.5
        s = solve_for_lambda(R, A, tol, grid, params=params)
        if bifurcation_functional(s)[0] < 0:
            logger.info("branch start refined to A=%.6g at R=%g", A, R)
            return s
    raise ExtendBranchError(
        f"extend branch: B1 is already positive at the first point A={first['A']:g} at R={R:g} "
        f"and stays positive down to A={A:g}; refine the start of the branch")


def find_tw_bifurcation(R: float, branch: Branch, tol: float = 1e-10, beta: Optional[float] = None,
                        l_max: int = 6, params: Optional[SolverParams] = None) -> BifurcationReport:
    """Root in A of B1 along the branch, with E01 on both sides and beta_l at the root.

    If B1 is already positive at the first branch point the start is refined
    by halving A until B1 turns negative.

    Raises:
        ExtendBranchError: B1 stays negative up to A_max ("increase A_max"), or
            stays positive all the way down ("refine the start of the branch").
    """
    params = params or get_default_params()
    beta = params['beta_default'] if beta is None else beta
    validate_beta(beta)
    points = list(branch['points'])
    grid = points[0]['phi']['grid']
    values = [bifurcation_functional(p)[0] for p in points]
    j = next((k for k in range(len(points) - 1) if values[k] * values[k + 1] < 0), None)
    if j is None and values[0] > 0:
        start = _refine_start(R, points[0], tol, params)
        points.insert(0, start)
        values.insert(0, bifurcation_functional(start)[0])
        j = 0
    if j is None:
        raise ExtendBranchError(
            f"extend branch: B1 does not change sign for A in "
            f"[{points[0]['A']:g}, {points[-1]['A']:g}] at R={R:g}; increase A_max")
    left, right = points[j], points[j + 1]
    hint = _neighbour_hint(left, right)

    def functional(A: float) -> float:
        return bifurcation_functional(solve_for_lambda(R, A, tol, grid, bracket=hint, params=params))[0]

    root_A = find_root_bracketed(functional, left['A'], right['A'], 1e-10 * max(1.0, right['A']))
    root = solve_for_lambda(R, root_A, tol, grid, bracket=hint, params=params)
    betas = [exceptional_beta(root, l) for l in range(2, l_max + 1)]
    near = [l for l, b in zip(range(2, l_max + 1), betas) if abs(beta - b) < params['exceptional_guard']]
    for l in near:
        logger.warning("beta=%g lies within %g of the exceptional value beta_%d=%.10g",
                       beta, params['exceptional_guard'], l, betas[l - 2])
    phi_tilde = solve_phi_tilde(root)
    logger.info("traveling-wave root R=%g: A*=%.12g Lambda*=%.12g phi_tilde'(R)=%.10g",
                R, root_A, root['lam'], phi_tilde['dprofile_R'])
    return BifurcationReport(
        root_A=root_A, root_state=root,
        A_left=left['A'], A_right=right['A'],
        B_left=values[j], B_right=values[j + 1],
        B_root=bifurcation_functional(root),
        E01_left=traveling_eigs_E01(left, beta), E01_right=traveling_eigs_E01(right, beta),
        beta=beta, beta_exceptional=betas,
        phi_tilde_dR=phi_tilde['dprofile_R'], near_exceptional=near,
    )


def bessel_lemma_J(R: float, N: int = 2048) -> BesselLemma:
    """J(R) = int w^2 r dr for the explicit subsolution w, by quadrature and in closed form."""
    validate_radius(R)
    grid = make_grid(R, N)
    tR = THETA * R
    I0, I1 = bessel_I(0, tR), bessel_I(1, tR)
    scale = 1.0 / (math.e - 1.0)
    w = make_radial_function(grid, scale * (1.0 - bessel_I_values(0, THETA * grid['r']) / I0))
    closed = scale ** 2 * (0.5 * R * R - 2.0 * R * I1 / (THETA * I0)
                           + R * R / (2.0 * I0 * I0) * (I0 * I0 - I1 * I1))
    quadrature = integrate_radial(make_radial_function(grid, w['values'] ** 2), 1)
    return BesselLemma(R=R, J=closed, J_quadrature=quadrature, w=w)


def subsolution_check(s: RadialSteadyState, tol: float = 1e-6) -> bool:
    """Phi >= w - tol on the whole grid."""
    if abs(s['lam'] - math.exp(-1.0)) > 1e-8:
        logger.debug("subsolution check at Lambda=%g rather than 1/e", s['lam'])
    grid = s['phi']['grid']
    w = bessel_lemma_J(s['R'], grid['N'])['w']['values']
    return bool(np.all(s['phi']['values'] >= w - tol))


def nonradial_bifurcation_beta(branch: Branch, l: int) -> NonradialCurve:
    """beta(A) = R^2 psi_l'(R)/(l^2 - 1) at each branch point; resonant points are skipped."""
    if l < 2:
        raise ValueError(f"non-radial modes need l >= 2, got {l}")
    points: List[Tuple[float, float]] = []
    indices: List[int] = []
    skipped: List[Tuple[float, str]] = []
    for k, s in enumerate(branch['points']):
        try:
            points.append((s['A'], exceptional_beta_psi(s, l)))
            indices.append(k)
        except ResonantModeError as exc:
            logger.warning("l=%d: branch point A=%.6g skipped: %s", l, s['A'], exc)
            skipped.append((s['A'], str(exc)))
    return NonradialCurve(R=branch['R'], l=l, points=points, indices=indices, skipped=skipped)


def locate_nonradial_crossing(R: float, branch: Branch, l: int, beta: float, tol: float = 1e-10,
                              params: Optional[SolverParams] = None
                              ) -> Tuple[float, RadialSteadyState]:
    """First A on the minimal sub-branch where beta_l(A) = beta."""
    params = params or get_default_params()
    validate_beta(beta)
    grid = branch['points'][0]['phi']['grid']
    segment = [zero_state(grid)] + branch['points'][:branch['minimal_index'] + 1]
    values = [0.0] + [exceptional_beta(s, l) for s in segment[1:]]
    for k in range(len(segment) - 1):
        if (values[k] - beta) * (values[k + 1] - beta) >= 0:
            continue
        left, right = segment[k], segment[k + 1]
        hint = _neighbour_hint(left, right)

        def mismatch(A: float) -> float:
            return exceptional_beta(solve_for_lambda(R, A, tol, grid, bracket=hint, params=params), l) - beta

        A_star = find_root_bracketed(mismatch, left['A'], right['A'], 1e-13 * max(1.0, right['A']))
        return A_star, solve_for_lambda(R, A_star, tol, grid, bracket=hint, params=params)
    raise ExtendBranchError(
        f"extend branch: beta_{l}(A) never reaches {beta:g} on the minimal branch at R={R:g}")
