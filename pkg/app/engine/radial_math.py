"""Radial quadrature, modified Bessel functions, shooting IVP and root bracketing.

Everything here is a pure function of its arguments. The grid, radial
function and boundary-condition records live in app.engine.state.
"""
import logging
import math
from typing import Callable

import mpmath as mp
import numpy as np
from scipy.integrate import simpson, solve_ivp
from scipy.optimize import brentq
from typing_extensions import TypedDict

from app.engine.state import RadialFunction, RadialGrid, make_radial_function
from app.utils import (
    DomainError,
    GridParityError,
    NoBracketError,
    ProfileBlowupError,
    validate_finite,
    validate_tolerance,
)

logger = logging.getLogger(__name__)

BESSEL_SWITCH = 15.0
BESSEL_MAX_ARG = 700.0
_EXP_CAP = 700.0


class IvpSolution(TypedDict):
    q: RadialFunction
    dq: RadialFunction
    q_prime_R: float


def integrate_radial(f: RadialFunction, weight_power: int = 0) -> float:
    """Composite Simpson value of the integral of f(r) * r**weight_power over [0, R]."""
    grid = f['grid']
    if grid['N'] % 2:
        raise GridParityError(f"grid parity: Simpson quadrature needs an even N, got {grid['N']}")
    if int(weight_power) != weight_power or weight_power < 0:
        raise ValueError(f"weight_power must be a non-negative integer, got {weight_power}")
    values = np.asarray(f['values'], dtype=float)
    validate_finite(values, "integrand")
    r = grid['r']
    integrand = values * r ** int(weight_power) if weight_power else values
    return float(simpson(integrand, x=r))


def _bessel_series(order: int, x: float) -> float:
    half = 0.5 * x
    term = 1.0 if order == 0 else half
    total = term
    k = 0
    while True:
        k += 1
        term *= half * half / (k * (k + order))
        total += term
        if term <= 1e-17 * total:
            return total


def _bessel_asymptotic(order: int, x: float) -> float:
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    for k in range(1, 80):
        nxt = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        # the expansion diverges once terms start growing
        if abs(nxt) >= abs(term):
            break
        total += nxt
        term = nxt
        if abs(term) < 1e-17 * abs(total):
            break
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * total


def bessel_I(order: int, x: float) -> float:
    """Modified Bessel function I_0 or I_1 for 0 <= x <= 700.

    Power series up to x = 15, large-argument expansion above.

    Raises:
        DomainError: order not in (0, 1) or x outside [0, 700].
    """
    if order not in (0, 1):
        raise DomainError(f"domain: only orders 0 and 1 are supported, got {order}")
    if not (0.0 <= x <= BESSEL_MAX_ARG):
        raise DomainError(f"domain: bessel_I argument must be in [0, {BESSEL_MAX_ARG:g}], got {x}")
    x = float(x)
    if x <= BESSEL_SWITCH:
        return _bessel_series(order, x)
    return _bessel_asymptotic(order, x)


_bessel_I_vec = np.vectorize(bessel_I, otypes=[float])


def bessel_I_values(order: int, x: np.ndarray) -> np.ndarray:
    return _bessel_I_vec(order, np.asarray(x, dtype=float))


def dirichlet_bessel_zero(n: int, k: int = 1) -> float:
    """k-th positive zero of J_n."""
    return float(mp.besseljzero(n, k))


def find_root_bracketed(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Root of f inside [a, b] where f changes sign; Brent's bisection/secant hybrid.

    Raises:
        NoBracketError: f(a) and f(b) have the same sign.
    """
    fa = f(a)
    fb = f(b)
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise NoBracketError(f"no bracket: non-finite endpoint value f({a})={fa}, f({b})={fb}")
    if fa == 0.0:
        return float(a)
    if fb == 0.0:
        return float(b)
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoBracketError(f"no bracket: f({a})={fa:.6g} and f({b})={fb:.6g} share a sign")
    return float(brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200))


def taylor_start(lam: float, A: float, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """q and q' near the origin: q = A + (A - lam e^A) r^2 / 4."""
    c = A - lam * math.exp(A)
    return A + 0.25 * c * r * r, 0.5 * c * r


def solve_radial_ivp(lam: float, A: float, grid: RadialGrid, tol: float,
                     blowup: float = 50.0) -> IvpSolution:
    """Shoot -q'' - q'/r + q = lam e^q from q(0) = A, q'(0) = 0 out to r = R.

    Raises:
        ProfileBlowupError: |q| reaches `blowup` before R.
    """
    validate_tolerance(tol)
    if lam < 0:
        raise DomainError(f"domain: Lambda must be >= 0, got {lam}")
    if abs(A) >= blowup:
        raise ProfileBlowupError(f"profile blow-up: |A|={abs(A):g} already exceeds {blowup:g}",
                                 sign=math.copysign(1.0, A), radius=0.0)
    R = grid['R']
    r = grid['r']
    r0 = 1e-4 * min(1.0, R)
    q0, p0 = taylor_start(lam, A, np.array(r0))

    def rhs(t, y):
        q, p = y
        return [p, q - lam * math.exp(min(q, _EXP_CAP)) - p / t]

    def leaves_window(t, y):
        return blowup - abs(y[0])
    leaves_window.terminal = True

    sol = solve_ivp(rhs, (r0, R), [float(q0), float(p0)], method='DOP853',
                    rtol=tol, atol=tol, dense_output=True, events=leaves_window)
    if sol.status == 1:
        radius = float(sol.t_events[0][0])
        sign = math.copysign(1.0, float(sol.y_events[0][0][0]))
        raise ProfileBlowupError(
            f"profile blow-up: |q| reached {blowup:g} at r={radius:.6g} (Lambda={lam:.12g}, A={A:.12g})",
            sign=sign, radius=radius)
    if sol.status != 0:
        raise ValueError(f"IVP integration failed for Lambda={lam}, A={A}: {sol.message}")

    q = np.empty_like(r)
    dq = np.empty_like(r)
    inner = r < r0
    q[inner], dq[inner] = taylor_start(lam, A, r[inner])
    dense = sol.sol(np.clip(r[~inner], r0, R))
    q[~inner] = dense[0]
    dq[~inner] = dense[1]
    return IvpSolution(
        q=make_radial_function(grid, q),
        dq=make_radial_function(grid, dq),
        q_prime_R=float(sol.y[1, -1]),
    )


def boundary_derivative(values: np.ndarray, h: float) -> float:
    """Backward 4-point estimate of f'(R)."""
    f = values
    return float((11 * f[-1] - 18 * f[-2] + 9 * f[-3] - 2 * f[-4]) / (6 * h))


def boundary_second_derivative(values: np.ndarray, h: float) -> float:
    """Backward 5-point estimate of f''(R)."""
    f = values
    return float((35 * f[-1] - 104 * f[-2] + 114 * f[-3] - 56 * f[-4] + 11 * f[-5]) / (12 * h * h))
