from typing import List, Literal, Optional, Tuple

import numpy as np
from typing_extensions import TypedDict

from app.utils import validate_finite, validate_grid_size, validate_radius


class RadialGrid(TypedDict):
    """Uniform grid r_i = i*R/N, i = 0..N on [0, R]."""
    R: float
    N: int
    h: float
    r: np.ndarray


class RadialFunction(TypedDict):
    grid: RadialGrid
    values: np.ndarray  # one finite sample per node


class BoundaryCondition(TypedDict):
    """Condition at r = R.

    'dirichlet': f(R) = value.  'robin': f'(R) = c*f(R) + d.
    """
    kind: Literal['dirichlet', 'robin']
    value: float
    c: float
    d: float


class RadialSteadyState(TypedDict):
    R: float
    lam: float
    A: float  # Phi(0)
    phi: RadialFunction
    dphi: RadialFunction  # Phi' sampled from the shooting dense output
    dphi_R: float
    d2phi_R: float


class Branch(TypedDict):
    R: float
    A_max: float
    steps: int
    points: List[RadialSteadyState]
    lambda_max: float
    sigma1: List[float]
    sigma2: List[float]
    sigma2_flags: List[int]  # sign of sigma2 per point
    minimal_index: int  # last index of the rising (minimal) sub-branch
    failures: List[Tuple[float, str]]  # (A, message) for skipped points


ModeKind = Literal['h', 'phi_tilde', 'psi', 'S2', 'S3', 'generic']


class ModeSolution(TypedDict):
    l: int
    kind: ModeKind
    profile: RadialFunction
    dprofile_R: float
    value_R: float  # boundary value, extrapolated like dprofile_R


class SpectrumReport(TypedDict):
    sigma: np.ndarray  # rows n = 0..n_max, columns l = 1..l_max
    E01: Optional[Tuple[complex, complex]]  # None for the trivial state
    El: List[float]  # l = 2..l_max
    beta: float
    beta_exceptional: List[float]
    state: dict


class BifurcationReport(TypedDict):
    root_A: float
    root_state: RadialSteadyState
    A_left: float
    A_right: float
    B_left: float
    B_right: float
    B_root: Tuple[float, float, float]
    E01_left: Tuple[complex, complex]
    E01_right: Tuple[complex, complex]
    beta: float
    beta_exceptional: List[float]  # beta_l for l = 2..len+1
    phi_tilde_dR: float
    near_exceptional: List[int]


class WaveShape(TypedDict):
    R: float
    V: float
    beta: float
    rho2: float
    rho3: float
    lambda0: float
    phi: np.ndarray
    radius: np.ndarray
    boundary: np.ndarray  # shape (samples, 2): (phi, radius)


class ExpansionFields(TypedDict):
    phi_tilde: ModeSolution
    S2: ModeSolution
    S3: ModeSolution
    lambda1: float
    sensitivity: Optional[float]


class NonradialCurve(TypedDict):
    R: float
    l: int
    points: List[Tuple[float, float]]  # (A, beta)
    indices: List[int]  # branch index of each entry in points
    skipped: List[Tuple[float, str]]


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def make_grid(R: float, N: int) -> RadialGrid:
    validate_radius(R)
    validate_grid_size(N)
    N = int(N)
    h = R / N
    return RadialGrid(R=float(R), N=N, h=h, r=_frozen(np.arange(N + 1) * h))


def make_radial_function(grid: RadialGrid, values: np.ndarray) -> RadialFunction:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid['N'] + 1,):
        raise ValueError(f"expected {grid['N'] + 1} samples, got shape {values.shape}")
    validate_finite(values)
    return RadialFunction(grid=grid, values=_frozen(values))


def constant_function(grid: RadialGrid, value: float) -> RadialFunction:
    return make_radial_function(grid, np.full(grid['N'] + 1, float(value)))


def coarsen(f: RadialFunction) -> RadialFunction:
    """Every other sample of f on the half-resolution grid."""
    grid = f['grid']
    coarse = make_grid(grid['R'], grid['N'] // 2)
    return make_radial_function(coarse, f['values'][::2])


def dirichlet(value: float = 0.0) -> BoundaryCondition:
    return BoundaryCondition(kind='dirichlet', value=float(value), c=0.0, d=0.0)


def robin(c: float, d: float = 0.0) -> BoundaryCondition:
    if not (np.isfinite(c) and np.isfinite(d)):
        raise ValueError(f"Robin coefficients must be finite, got c={c}, d={d}")
    return BoundaryCondition(kind='robin', value=0.0, c=float(c), d=float(d))


def zero_state(grid: RadialGrid) -> RadialSteadyState:
    zeros = constant_function(grid, 0.0)
    return RadialSteadyState(
        R=grid['R'], lam=0.0, A=0.0, phi=zeros, dphi=zeros, dphi_R=0.0, d2phi_R=0.0,
    )


def state_summary(s: RadialSteadyState) -> dict:
    return {
        'A': s['A'],
        'lambda': s['lam'],
        'R': s['R'],
        'dphi_R': s['dphi_R'],
        'd2phi_R': s['d2phi_R'],
        'N': s['phi']['grid']['N'],
    }
