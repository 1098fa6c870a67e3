"""Numerical engine for radial steady states, spectra, bifurcations and wave shapes."""

from .state import (
    BifurcationReport,
    BoundaryCondition,
    Branch,
    ExpansionFields,
    ModeSolution,
    NonradialCurve,
    RadialFunction,
    RadialGrid,
    RadialSteadyState,
    SpectrumReport,
    WaveShape,
    dirichlet,
    make_grid,
    make_radial_function,
    robin,
    zero_state,
)
from .params import SolverParams, get_default_params, validate_params
from .radial_math import bessel_I, find_root_bracketed, integrate_radial, solve_radial_ivp
from .mode_solver import eig_sturm_liouville, solve_mode_bvp
from .steady import (
    mass_identity_residual,
    minimal_solution,
    pohozhaev_residuals,
    solve_for_lambda,
    suzuki_mass,
    trace_branch,
)
from .spectral import (
    exceptional_beta,
    sigma_table,
    solve_h_mode,
    solve_phi_tilde,
    solve_psi_mode,
    spectrum_report,
    steady_eig_El,
    traveling_eigs_E01,
)
from .bifurcation import (
    bessel_lemma_J,
    bifurcation_functional,
    find_tw_bifurcation,
    nonradial_bifurcation_beta,
    subsolution_check,
)
from .wave_shape import lambda_sensitivity, shape, solve_S2, solve_S3
