from typing_extensions import TypedDict


class SolverParams(TypedDict):
    """Numerical settings shared by every engine module.

    None of these come from the model itself; they are resolution and
    tolerance choices for the discretization.
    """
    grid_n: int  # radial intervals on [0, R]
    ivp_tol: float  # local error target of the shooting integrator
    root_tol: float  # bracket width for root finding
    scan_brackets: int  # sub-brackets of [0, 1 + mu_D] in the Lambda scan
    scan_tol: float  # looser IVP tolerance while scanning for a sign change
    a_max: float  # largest central value A accepted by solve_for_lambda
    a_seed: float  # central value of the near-trivial point opening every branch
    blowup: float  # |q| threshold terminating the shooting integration
    resonance_tol: float  # |sigma| below this makes a mode solve resonant
    exceptional_guard: float  # minimal distance of beta from any beta_l
    v_cap: float  # largest |V| accepted by the shape expansion
    identity_tol: float  # residual threshold for the integral identities
    beta_default: float  # surface tension used when none is supplied


def get_default_params() -> SolverParams:
    return SolverParams(
        grid_n=2048,
        ivp_tol=1e-10,
        root_tol=1e-12,
        scan_brackets=64,
        scan_tol=1e-8,
        a_max=12.0,
        a_seed=1e-3,
        blowup=50.0,
        resonance_tol=1e-6,
        exceptional_guard=1e-3,
        v_cap=0.5,
        identity_tol=1e-6,
        beta_default=0.625,
    )


def validate_params(params: SolverParams) -> None:
    if params['grid_n'] < 64 or params['grid_n'] % 2:
        raise ValueError("grid_n must be an even integer >= 64")
    if not (1e-14 < params['ivp_tol'] < 1e-4):
        raise ValueError("ivp_tol must be in (1e-14, 1e-4)")
    if not (1e-14 < params['scan_tol'] < 1e-4):
        raise ValueError("scan_tol must be in (1e-14, 1e-4)")
    if params['root_tol'] <= 0:
        raise ValueError("root_tol must be >0")
    if params['scan_brackets'] < 2:
        raise ValueError("scan_brackets must be >= 2")
    if params['a_max'] <= 0:
        raise ValueError("a_max must be >0")
    if not (0 < params['a_seed'] < params['a_max']):
        raise ValueError("a_seed must be in (0, a_max)")
    if params['blowup'] <= params['a_max']:
        raise ValueError("blowup must exceed a_max")
    if params['resonance_tol'] <= 0:
        raise ValueError("resonance_tol must be >0")
    if params['exceptional_guard'] < 0:
        raise ValueError("exceptional_guard must be non-negative")
    if not (0 < params['v_cap'] <= 1):
        raise ValueError("v_cap must be in (0, 1]")
    if params['identity_tol'] <= 0:
        raise ValueError("identity_tol must be >0")
    if params['beta_default'] <= 0:
        raise ValueError("beta_default must be >0")


def get_parameter_documentation() -> dict[str, str]:
    """Short descriptions of SolverParams, used for the CLI help epilog."""
    return {
        'grid_n': "Radial grid intervals N (even, >= 64); LIOUVILLE_GRID_N overrides it",
        'ivp_tol': "Local error tolerance of the shooting IVP",
        'root_tol': "Bracket width at which root finding stops",
        'scan_brackets': "Equal sub-brackets used to scan Lambda over [0, 1 + mu_D]",
        'scan_tol': "IVP tolerance while scanning; the root is polished at ivp_tol",
        'a_max': "Largest admissible central value A = Phi(0)",
        'a_seed': "Central value of the first, near-trivial branch point",
        'blowup': "Profile magnitude at which shooting is abandoned",
        'resonance_tol': "Eigenvalue magnitude below which a mode problem is resonant",
        'exceptional_guard': "Minimal allowed |beta - beta_l| for shape solves",
        'v_cap': "Largest wave speed |V| accepted by the shape expansion",
        'identity_tol': "Residual threshold for Pohozhaev and mass identities",
        'beta_default': "Surface tension beta when none is given",
    }
