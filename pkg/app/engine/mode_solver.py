"""Finite-difference solves for single angular modes.

The operator for mode l is

    -(1/r)(r f')' + (l^2/r^2 + 1 - potential) f

discretized in conservative form on the uniform grid. The matrix is
tridiagonal; a Robin condition at R is folded in through a ghost node so it
stays tridiagonal. Its spectrum is real: rescaling rows gives a symmetric
tridiagonal matrix, which is what the resonance check and the eigensolver use.
"""
import logging
from typing import List

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal, solve_banded
from typing_extensions import TypedDict

from app.engine.radial_math import boundary_derivative
from app.engine.state import (
    BoundaryCondition,
    ModeKind,
    ModeSolution,
    RadialFunction,
    RadialGrid,
    coarsen,
    dirichlet,
    make_grid,
    make_radial_function,
)
from app.utils import ResonantModeError, validate_finite

logger = logging.getLogger(__name__)

RESONANCE_TOL = 1e-6


class ModeOperator(TypedDict):
    l: int
    first: int  # first unknown node index
    last: int  # last unknown node index
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    coupling: float  # coefficient of the node beyond `last` in the last row


def _check_same_grid(f: RadialFunction, grid: RadialGrid, what: str) -> None:
    g = f['grid']
    if g['N'] != grid['N'] or g['R'] != grid['R']:
        raise ValueError(f"{what} lives on a grid (R={g['R']}, N={g['N']}) "
                         f"different from the solve grid (R={grid['R']}, N={grid['N']})")


def assemble_mode_operator(l: int, potential: RadialFunction, bc: BoundaryCondition,
                           grid: RadialGrid) -> ModeOperator:
    if l < 0:
        raise ValueError(f"mode index l must be >= 0, got {l}")
    _check_same_grid(potential, grid, "potential")
    N, h, r = grid['N'], grid['h'], grid['r']
    V = potential['values']
    first = 0 if l == 0 else 1
    last = N if bc['kind'] == 'robin' else N - 1
    idx = np.arange(first, last + 1)
    ri = r[idx]
    inv_h2 = 1.0 / (h * h)

    lower = np.zeros(idx.size)
    upper = np.zeros(idx.size)
    diag = np.zeros(idx.size)
    pos = ri > 0
    rp = ri[pos]
    lower[pos] = -(1.0 - h / (2.0 * rp)) * inv_h2
    upper[pos] = -(1.0 + h / (2.0 * rp)) * inv_h2
    diag[pos] = 2.0 * inv_h2 + l * l / (rp * rp) + 1.0 - V[idx[pos]]
    if first == 0:
        # f'(0) = 0 through the symmetric ghost f_{-1} = f_1
        upper[0] = -4.0 * inv_h2
        diag[0] = 4.0 * inv_h2 + 1.0 - V[0]

    coupling = float(upper[-1])
    if bc['kind'] == 'robin':
        # ghost node f_{N+1} = f_{N-1} + 2h (c f_N + d)
        lower[-1] += coupling
        diag[-1] += 2.0 * h * bc['c'] * coupling
    upper[-1] = 0.0
    return ModeOperator(l=l, first=first, last=last, lower=lower, diag=diag, upper=upper,
                        coupling=coupling)


def symmetrized_tridiagonal(op: ModeOperator) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric matrix similar to `op`."""
    prod = op['upper'][:-1] * op['lower'][1:]
    if np.any(prod <= 0):
        raise ValueError("mode operator is not symmetrizable on this grid")
    return op['diag'], -np.sqrt(prod)


def count_near_zero_eigenvalues(op: ModeOperator, tol: float = RESONANCE_TOL) -> int:
    d, e = symmetrized_tridiagonal(op)
    found = eigvalsh_tridiagonal(d, e, select='v', select_range=(-tol, tol))
    return int(found.size)


def _solve_once(l: int, potential: RadialFunction, rhs: RadialFunction, bc: BoundaryCondition,
                grid: RadialGrid, resonance_tol: float | None) -> tuple[np.ndarray, float, float]:
    op = assemble_mode_operator(l, potential, bc, grid)
    if resonance_tol is not None:
        hits = count_near_zero_eigenvalues(op, resonance_tol)
        if hits:
            raise ResonantModeError(
                f"resonant mode: l={l} operator has {hits} eigenvalue(s) within "
                f"{resonance_tol:g} of zero", count=hits)

    first, last = op['first'], op['last']
    b = np.array(rhs['values'][first:last + 1], dtype=float)
    if bc['kind'] == 'dirichlet':
        b[-1] -= op['coupling'] * bc['value']
    else:
        b[-1] -= op['coupling'] * 2.0 * grid['h'] * bc['d']

    m = b.size
    ab = np.zeros((3, m))
    ab[0, 1:] = op['upper'][:-1]
    ab[1, :] = op['diag']
    ab[2, :-1] = op['lower'][1:]
    sol = solve_banded((1, 1), ab, b)

    values = np.zeros(grid['N'] + 1)
    values[first:last + 1] = sol
    if bc['kind'] == 'dirichlet':
        values[-1] = bc['value']
        return values, bc['value'], boundary_derivative(values, grid['h'])
    return values, values[-1], bc['c'] * values[-1] + bc['d']


def richardson_correction(fine: np.ndarray, coarse: np.ndarray) -> np.ndarray:
    """Correction removing the h^2 error term of `fine`, given the solve on every other node.

    Exact on the shared nodes; on the odd nodes the correction is the mean of
    its neighbours, which keeps the result fourth order.
    """
    shared = (fine[::2] - coarse) / 3.0
    corr = np.empty_like(fine)
    corr[::2] = shared
    corr[1::2] = 0.5 * (shared[:-1] + shared[1:])
    return corr


def solve_mode_bvp(l: int, potential: RadialFunction, rhs: RadialFunction,
                   bc: BoundaryCondition, grid: RadialGrid, kind: ModeKind = 'generic',
                   extrapolate: bool = True,
                   resonance_tol: float = RESONANCE_TOL) -> ModeSolution:
    """Solve -(1/r)(r f')' + (l^2/r^2 + 1 - potential) f = rhs with `bc` at R.

    f(0) = 0 for l >= 1 and f'(0) = 0 for l = 0. Whenever N is a multiple of 4
    the profile, the boundary derivative and the boundary value are
    Richardson-extrapolated against the same problem on every other node, which
    makes all three fourth order.

    Raises:
        ResonantModeError: the discrete operator has an eigenvalue within
            `resonance_tol` of zero.
    """
    _check_same_grid(rhs, grid, "rhs")
    validate_finite(rhs['values'][1:] if l else rhs['values'], "rhs")
    values, value_R, dR = _solve_once(l, potential, rhs, bc, grid, resonance_tol)
    if extrapolate and grid['N'] % 4 == 0 and grid['N'] // 2 >= 64:
        coarse_grid = make_grid(grid['R'], grid['N'] // 2)
        coarse_values, coarse_value_R, coarse_dR = _solve_once(
            l, coarsen(potential), coarsen(rhs), bc, coarse_grid, None)
        values = values + richardson_correction(values, coarse_values)
        dR = (4.0 * dR - coarse_dR) / 3.0
        value_R = (4.0 * value_R - coarse_value_R) / 3.0
    return ModeSolution(l=l, kind=kind, profile=make_radial_function(grid, values),
                        dprofile_R=float(dR), value_R=float(value_R))


def eig_sturm_liouville(n: int, potential: RadialFunction, k_max: int,
                        grid: RadialGrid) -> List[float]:
    """The k_max smallest eigenvalues sigma_{n,k} of the mode-n operator with w(R) = 0."""
    if not (1 <= k_max <= grid['N'] // 4):
        raise ValueError(f"k_max must be in [1, N/4={grid['N'] // 4}], got {k_max}")
    op = assemble_mode_operator(n, potential, dirichlet(0.0), grid)
    d, e = symmetrized_tridiagonal(op)
    sigma = eigvalsh_tridiagonal(d, e, select='i', select_range=(0, k_max - 1))
    return [float(s) for s in np.sort(sigma)]
