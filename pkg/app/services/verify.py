"""Identity suite behind the `verify` command.

Every check is a CheckResult row; a run passes when every row passes.
"""
import logging
import math
from typing import List

import numpy as np
from typing_extensions import TypedDict

from app.config import RunConfig
from app.engine.bifurcation import bessel_lemma_J, subsolution_check
from app.engine.params import get_default_params
from app.engine.spectral import sigma_table, solve_h_mode, solve_psi_mode
from app.engine.state import (
    Branch,
    RadialSteadyState,
    make_grid,
    make_radial_function,
)
from app.engine.steady import (
    constant_solution_check,
    lambda_upper_bound,
    mass_identity_residual,
    minimal_solution,
    pohozhaev_residuals,
    suzuki_applies,
    suzuki_mass,
    trace_branch,
)

logger = logging.getLogger(__name__)

H1_TOL = 1e-4
SAMPLED_POINTS = 8


class CheckResult(TypedDict):
    name: str
    value: float
    threshold: float
    passed: bool


def _check(name: str, value: float, threshold: float, passed: bool) -> CheckResult:
    level = logging.INFO if passed else logging.ERROR
    logger.log(level, "%-24s value=%.6g threshold=%.6g %s", name, value, threshold,
               "PASS" if passed else "FAIL")
    return CheckResult(name=name, value=float(value), threshold=float(threshold), passed=bool(passed))


def perturb_state(s: RadialSteadyState, amplitude: float = 1e-3) -> RadialSteadyState:
    """Copy of s with Phi shifted by amplitude*(1 - (r/R)^2); negative control only."""
    grid = s['phi']['grid']
    bump = amplitude * (1.0 - (grid['r'] / s['R']) ** 2)
    corrupted = dict(s)
    corrupted['phi'] = make_radial_function(grid, s['phi']['values'] + bump)
    return RadialSteadyState(**corrupted)


def sampled_indices(count: int, samples: int = SAMPLED_POINTS) -> List[int]:
    return sorted(set(np.linspace(0, count - 1, min(samples, count)).astype(int).tolist()))


def psi_ordering_holds(s: RadialSteadyState, modes=(2, 3, 4)) -> bool:
    """0 > psi_l/(l^2-1) and the normalized profiles increase with l on (0, R)."""
    normalized = [solve_psi_mode(s, l)['profile']['values'][1:-1] / (l * l - 1) for l in modes]
    if any(np.any(p >= 0.0) for p in normalized):
        return False
    return all(np.all(lo < hi) for lo, hi in zip(normalized[:-1], normalized[1:]))


def branch_checks(branch: Branch) -> List[CheckResult]:
    params = get_default_params()
    tol = params['identity_tol']
    points = branch['points']
    R = branch['R']
    results: List[CheckResult] = []

    poho = max(max(pohozhaev_residuals(s)) for s in points)
    results.append(_check('pohozhaev', poho, tol, poho <= tol))
    mass = max(mass_identity_residual(s) for s in points)
    results.append(_check('mass_identity', mass, tol, mass <= tol))

    top = lambda_upper_bound(R)
    results.append(_check('lambda_upper_bound', branch['lambda_max'], top, branch['lambda_max'] <= top))
    if R >= 4.0:
        floor = math.exp(-1.0)
        results.append(_check('lambda_max_ge_1_over_e', branch['lambda_max'], floor,
                              branch['lambda_max'] >= floor))

    picks = sampled_indices(len(points))
    h1 = max(float(np.max(np.abs(solve_h_mode(points[k], 1)['profile']['values']
                                 + points[k]['dphi']['values']))) for k in picks)
    results.append(_check('h1_equals_minus_dphi', h1, H1_TOL, h1 <= H1_TOL))

    sigma_min = min(float(np.min(sigma_table(points[k], 4, 4)[1:])) for k in picks)
    results.append(_check('sigma_positive', sigma_min, 0.0, sigma_min > 0.0))

    masses = [suzuki_mass(s) for s in points if suzuki_applies(s)]
    if masses:
        results.append(_check('suzuki_mass', min(masses), 4.0, min(masses) >= 4.0))

    minimal = [k for k in picks if k <= branch['minimal_index']]
    ordered = all(psi_ordering_holds(points[k]) for k in minimal)
    results.append(_check('psi_ordering', float(len(minimal)), 0.0, ordered))
    return results


def run_identity_suite(config: RunConfig, perturb: bool = False) -> List[CheckResult]:
    R = config['R']
    grid = make_grid(R, config['N'])
    branch = trace_branch(R, config['A_max'], config['steps'], grid)
    if perturb:
        logger.warning("perturbation mode: Phi corrupted by 1e-3 on every branch point")
        branch = Branch(**{**branch, 'points': [perturb_state(s) for s in branch['points']]})

    results = branch_checks(branch)

    const = constant_solution_check(R)
    results.append(_check('constant_solution', const, 1e-8, const <= 1e-8))

    lemma = bessel_lemma_J(R, config['N'])
    gap = abs(lemma['J'] - lemma['J_quadrature'])
    results.append(_check('bessel_J_quadrature', gap, 1e-8, gap <= 1e-8))
    if R >= 4.0:
        results.append(_check('bessel_J_exceeds_half', lemma['J'], 0.5, lemma['J'] > 0.5))
    if R > 4.0:
        J4 = bessel_lemma_J(4.0, config['N'])['J']
        results.append(_check('bessel_J_increasing', lemma['J'], J4, lemma['J'] > J4))
        logger.info("J(%g) = %.10g > J(4) = %.10g", R, lemma['J'], J4)

    if R >= 4.0 and branch['lambda_max'] > math.exp(-1.0):
        s = minimal_solution(R, math.exp(-1.0), branch)
        ok = subsolution_check(s)
        results.append(_check('subsolution', float(np.min(s['phi']['values'] - lemma['w']['values'])),
                              -1e-6, ok))
    return results
