"""Radially symmetric steady states.

Solutions of -(1/r)(r Phi')' + Phi = Lambda e^Phi on (0, R) with
Phi'(0) = Phi(R) = 0, parametrized by the central value A = Phi(0).
Lambda is found by shooting: for fixed A the endpoint q(R) of the initial
value problem changes sign exactly once on [0, 1 + mu_D], mu_D = (j_{0,1}/R)^2.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from app.engine.mode_solver import eig_sturm_liouville
from app.engine.params import SolverParams, get_default_params
from app.engine.radial_math import (
    bessel_I,
    bessel_I_values,
    dirichlet_bessel_zero,
    find_root_bracketed,
    integrate_radial,
    solve_radial_ivp,
)
from app.engine.state import (
    Branch,
    RadialFunction,
    RadialGrid,
    RadialSteadyState,
    make_grid,
    make_radial_function,
    zero_state,
)
from app.utils import (
    BeyondFoldError,
    DomainError,
    MultipleRootsError,
    NoBracketError,
    NoSteadyStateError,
    ProfileBlowupError,
    validate_radius,
)

logger = logging.getLogger(__name__)


def lambda_upper_bound(R: float) -> float:
    """1 + mu_D; no steady state has a larger Lambda."""
    return 1.0 + (dirichlet_bessel_zero(0, 1) / R) ** 2


def potential(s: RadialSteadyState) -> RadialFunction:
    """Lambda e^Phi sampled on the state's grid."""
    phi = s['phi']
    return make_radial_function(phi['grid'], s['lam'] * np.exp(phi['values']))


def small_lambda_profile(grid: RadialGrid) -> RadialFunction:
    """g = 1 - I0(r)/I0(R), the first-order term of Phi = Lambda g + O(Lambda^2)."""
    R = grid['R']
    return make_radial_function(grid, 1.0 - bessel_I_values(0, grid['r']) / bessel_I(0, R))


def _integral(grid: RadialGrid, values: np.ndarray, power: int) -> float:
    return integrate_radial(make_radial_function(grid, values), power)


def _resolve_grid(R: float, grid: Optional[RadialGrid], params: SolverParams) -> RadialGrid:
    if grid is None:
        return make_grid(R, params['grid_n'])
    if not math.isclose(grid['R'], R, rel_tol=0, abs_tol=1e-14 * max(1.0, R)):
        raise ValueError(f"grid radius {grid['R']} does not match R={R}")
    return grid


def _shoot(lam: float, A: float, grid: RadialGrid, tol: float, blowup: float) -> float:
    try:
        return float(solve_radial_ivp(lam, A, grid, tol, blowup)['q']['values'][-1])
    except ProfileBlowupError as exc:
        return exc.sign * blowup


def _scan_bracket(A: float, grid: RadialGrid, params: SolverParams) -> Tuple[float, float]:
    top = lambda_upper_bound(grid['R'])
    lams = np.linspace(0.0, top, params['scan_brackets'] + 1)
    vals = [_shoot(lam, A, grid, params['scan_tol'], params['blowup']) for lam in lams]
    changes = [j for j in range(len(lams) - 1) if vals[j] == 0.0 or vals[j] * vals[j + 1] < 0]
    if not changes:
        raise NoSteadyStateError(
            f"no steady state at this A: A={A:g}, R={grid['R']:g}; q(R) keeps its sign on "
            f"[0, {top:.6g}]")
    if len(changes) > 1:
        where = ", ".join(f"[{lams[j]:.4g}, {lams[j + 1]:.4g}]" for j in changes)
        raise MultipleRootsError(f"multiple roots: A={A:g} has sign changes in {where}")
    j = changes[0]
    return float(lams[j]), float(lams[j + 1])


def _build_state(R: float, lam: float, A: float, grid: RadialGrid, tol: float,
                 blowup: float) -> RadialSteadyState:
    ivp = solve_radial_ivp(lam, A, grid, tol, blowup)
    dphi_R = ivp['q_prime_R']
    return RadialSteadyState(
        R=R, lam=lam, A=A, phi=ivp['q'], dphi=ivp['dq'],
        dphi_R=dphi_R, d2phi_R=-lam - dphi_R / R,
    )


def solve_for_lambda(R: float, A: float, tol: float = 1e-10, grid: Optional[RadialGrid] = None,
                     bracket: Optional[Tuple[float, float]] = None,
                     params: Optional[SolverParams] = None) -> RadialSteadyState:
    """Steady state with central value A.

    A scan of [0, 1 + mu_D] in `scan_brackets` pieces locates the sign change of
    q(R). A `bracket` hint whose ends give opposite signs of q(R) is used as is
    and skips the scan, so the multiple-roots check does not run for it; callers
    pass hints only around a neighbouring branch point whose own solve was scanned
    or hinted from one.

    Raises:
        DomainError: A outside (0, a_max].
        NoSteadyStateError: q(R) has no sign change on the scan.
        MultipleRootsError: more than one sign change was found (scan path only).
    """
    params = params or get_default_params()
    validate_radius(R)
    grid = _resolve_grid(R, grid, params)
    if A == 0:
        return zero_state(grid)
    if not (0 < A <= params['a_max']):
        raise DomainError(f"domain: A must lie in (0, {params['a_max']:g}], got {A}")

    top = lambda_upper_bound(R)
    lo = hi = None
    if bracket is not None:
        b_lo, b_hi = max(0.0, bracket[0]), min(top, bracket[1])
        if b_lo < b_hi:
            f_lo = _shoot(b_lo, A, grid, params['scan_tol'], params['blowup'])
            f_hi = _shoot(b_hi, A, grid, params['scan_tol'], params['blowup'])
            if f_lo * f_hi < 0:
                lo, hi = b_lo, b_hi
    if lo is None:
        lo, hi = _scan_bracket(A, grid, params)

    def endpoint(lam: float) -> float:
        return _shoot(lam, A, grid, tol, params['blowup'])

    try:
        lam = find_root_bracketed(endpoint, lo, hi, params['root_tol'])
    except NoBracketError:
        # scan and polish tolerances disagree on a root sitting at a bracket end
        width = hi - lo
        lam = find_root_bracketed(endpoint, max(0.0, lo - width), min(top, hi + width),
                                  params['root_tol'])
    logger.debug("solve_for_lambda R=%g A=%.10g -> Lambda=%.12g", R, A, lam)
    return _build_state(R, lam, A, grid, tol, params['blowup'])


def trace_branch(R: float, A_max: float, steps: int, grid: Optional[RadialGrid] = None,
                 tol: float = 1e-10, params: Optional[SolverParams] = None) -> Branch:
    """States at A_j = j*A_max/steps, j = 1..steps, with sigma_1 and sigma_2 at each.

    The branch opens with a near-trivial point at A = min(a_seed, A_1 / 2), so
    points[0] sits next to the zero state and the first interval cannot hide
    a sign change of a branch functional. Failed points are logged and listed
    in `failures`; they never vanish silently.
    """
    params = params or get_default_params()
    validate_radius(R)
    if int(steps) != steps or steps < 32:
        raise ValueError(f"steps must be an integer >= 32, got {steps}")
    if not (0 < A_max <= params['a_max']):
        raise DomainError(f"domain: A_max must lie in (0, {params['a_max']:g}], got {A_max}")
    grid = _resolve_grid(R, grid, params)
    half_width = lambda_upper_bound(R) / 8.0

    points: List[RadialSteadyState] = []
    sigma1: List[float] = []
    sigma2: List[float] = []
    failures: List[Tuple[float, str]] = []
    prev_lam: Optional[float] = None
    seed = min(params['a_seed'], 0.5 * A_max / steps)
    for A in [seed] + [j * A_max / steps for j in range(1, int(steps) + 1)]:
        hint = None if prev_lam is None else (prev_lam - half_width, prev_lam + half_width)
        try:
            s = solve_for_lambda(R, A, tol, grid, bracket=hint, params=params)
        except (NoSteadyStateError, MultipleRootsError, NoBracketError, ProfileBlowupError) as exc:
            logger.warning("branch point A=%.6g skipped: %s", A, exc)
            failures.append((A, str(exc)))
            continue
        s1, s2 = eig_sturm_liouville(0, potential(s), 2, grid)
        points.append(s)
        sigma1.append(s1)
        sigma2.append(s2)
        prev_lam = s['lam']

    if not points:
        raise NoSteadyStateError(f"no steady state at this A: every point of the branch R={R:g} failed")
    lams = [p['lam'] for p in points]
    minimal_index = int(np.argmax(lams))
    logger.info("branch R=%g: %d points, %d failures, lambda_max=%.10g at A=%.6g",
                R, len(points), len(failures), lams[minimal_index], points[minimal_index]['A'])
    return Branch(
        R=R, A_max=A_max, steps=int(steps), points=points,
        lambda_max=float(lams[minimal_index]),
        sigma1=sigma1, sigma2=sigma2,
        sigma2_flags=[int(np.sign(v)) for v in sigma2],
        minimal_index=minimal_index, failures=failures,
    )


def _solution_on_segment(R: float, lam: float, branch: Branch, segment: List[RadialSteadyState],
                         tol: float, params: SolverParams) -> RadialSteadyState:
    grid = branch['points'][0]['phi']['grid']
    margin = 0.05 * lambda_upper_bound(R)
    for left, right in zip(segment[:-1], segment[1:]):
        lo_lam, hi_lam = sorted((left['lam'], right['lam']))
        if not (lo_lam <= lam <= hi_lam):
            continue
        hint = (lo_lam - margin, hi_lam + margin)

        def mismatch(A: float) -> float:
            return solve_for_lambda(R, A, tol, grid, bracket=hint, params=params)['lam'] - lam

        A_star = find_root_bracketed(mismatch, left['A'], right['A'], 1e-10 * max(1.0, right['A']))
        return solve_for_lambda(R, A_star, tol, grid, bracket=hint, params=params)
    raise NoSteadyStateError(f"no steady state at this A: Lambda={lam:g} is not crossed on this segment")


def minimal_solution(R: float, lam: float, branch: Branch, tol: float = 1e-10,
                     params: Optional[SolverParams] = None) -> RadialSteadyState:
    """The pointwise minimal solution at Lambda, found on the rising part of Lambda(A).

    Raises:
        BeyondFoldError: Lambda >= lambda_max of the branch.
    """
    params = params or get_default_params()
    if lam < 0:
        raise DomainError(f"domain: Lambda must be >= 0, got {lam}")
    grid = branch['points'][0]['phi']['grid']
    if lam == 0:
        return zero_state(grid)
    if lam >= branch['lambda_max']:
        raise BeyondFoldError(
            f"beyond fold: Lambda={lam:g} >= lambda_max={branch['lambda_max']:.10g}")
    rising = [zero_state(grid)] + branch['points'][:branch['minimal_index'] + 1]
    return _solution_on_segment(R, lam, branch, rising, tol, params)


def upper_solution(R: float, lam: float, branch: Branch, tol: float = 1e-10,
                   params: Optional[SolverParams] = None) -> RadialSteadyState:
    """The solution at Lambda on the falling part of Lambda(A), past the fold."""
    params = params or get_default_params()
    if lam >= branch['lambda_max']:
        raise BeyondFoldError(
            f"beyond fold: Lambda={lam:g} >= lambda_max={branch['lambda_max']:.10g}")
    falling = branch['points'][branch['minimal_index']:]
    return _solution_on_segment(R, lam, branch, falling, tol, params)


def pohozhaev_residuals(s: RadialSteadyState) -> Tuple[float, float]:
    """Relative defects of P_L = P_M and P_L = P_R."""
    grid = s['phi']['grid']
    R, lam = s['R'], s['lam']
    phi = s['phi']['values']
    forcing = lam * np.exp(phi)
    P_L = 0.5 * (R * s['dphi_R']) ** 2 + _integral(grid, phi * phi, 1)
    P_M = -_integral(grid, forcing * s['dphi']['values'], 2)
    P_R = 2.0 * _integral(grid, forcing, 1) - lam * R * R
    scale = 1.0 + abs(P_L)
    return abs(P_L - P_M) / scale, abs(P_L - P_R) / scale


def suzuki_mass(s: RadialSteadyState) -> float:
    """M = Lambda * integral of e^Phi r dr."""
    grid = s['phi']['grid']
    return s['lam'] * _integral(grid, np.exp(s['phi']['values']), 1)


def mass_identity_residual(s: RadialSteadyState) -> float:
    grid = s['phi']['grid']
    M = suzuki_mass(s)
    rhs = _integral(grid, s['phi']['values'], 1) - s['R'] * s['dphi_R']
    return abs(M - rhs) / (1.0 + abs(M))


def suzuki_applies(s: RadialSteadyState) -> bool:
    """True when the second radial eigenvalue of -Laplacian - Lambda e^Phi is negative."""
    grid = s['phi']['grid']
    second = eig_sturm_liouville(0, potential(s), 2, grid)[1]
    return second - 1.0 < 0.0


def constant_solution_check(R: float, tol: float = 1e-10, N: int = 256) -> float:
    """Sup-norm deviation of the Lambda = 1/e, A = 1 shooting profile from the constant 1."""
    grid = make_grid(R, N)
    q = solve_radial_ivp(math.exp(-1.0), 1.0, grid, tol)['q']['values']
    return float(np.max(np.abs(q - 1.0)))


def is_strictly_decreasing(s: RadialSteadyState) -> bool:
    return bool(np.all(np.diff(s['phi']['values']) < 0.0)) and s['dphi_R'] < 0.0
