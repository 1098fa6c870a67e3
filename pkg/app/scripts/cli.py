"""Command-line front end.

Exit status: 0 success, 1 computational failure, 2 usage error.
Data go to files or stdout; diagnostics go to stderr through logging.
"""
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from app.config import (
    RunConfig,
    load_config_file,
    load_env,
    merge_run_config,
    validate_run_config,
)
from app.engine.bifurcation import bessel_lemma_J, find_tw_bifurcation
from app.engine.params import get_parameter_documentation
from app.engine.spectral import spectrum_report
from app.engine.state import make_grid, state_summary
from app.engine.steady import solve_for_lambda, trace_branch
from app.engine.wave_shape import fourier_projection, shape
from app.scripts.export_csv import export_branch_csv, export_shape_csv
from app.scripts.generate_graph import generate_branch_graph, generate_shape_graph
from app.services.verify import run_identity_suite
from app.utils import serialize_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# argparse dest -> RunConfig field
_FLAG_FIELDS = {
    'R': 'R', 'beta': 'beta', 'A': 'A', 'a_max': 'A_max', 'steps': 'steps', 'N': 'N',
    'V': 'V', 'samples': 'samples', 'l_max': 'l_max', 'n_max': 'n_max',
    'out': 'out', 'svg': 'svg', 'baseline': 'baseline',
}


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(text + '\n')
        logger.info("wrote %s", path)
    else:
        sys.stdout.write(text + '\n')


def _pair_kind(pair) -> str:
    return 'real' if all(abs(e.imag) == 0.0 for e in pair) else 'complex'


def _trace(config: RunConfig):
    grid = make_grid(config['R'], config['N'])
    return trace_branch(config['R'], config['A_max'], config['steps'], grid)


def cmd_branch(config: RunConfig) -> int:
    branch = _trace(config)
    out = config['out'] or 'branch.csv'
    export_branch_csv(branch, out)
    logger.info("wrote %d branch rows to %s", len(branch['points']), out)
    if config['svg']:
        plt.close(generate_branch_graph(branch, config['svg']))
    if branch['failures']:
        logger.error("%d branch point(s) failed", len(branch['failures']))
        return EXIT_FAILURE
    return EXIT_OK


def cmd_bifurcate(config: RunConfig) -> int:
    branch = _trace(config)
    report = find_tw_bifurcation(config['R'], branch, beta=config['beta'], l_max=config['l_max'])
    root = report['root_state']
    summary: Dict[str, Any] = {
        'root_A': report['root_A'],
        'state': state_summary(root),
        'B_root': list(report['B_root']),
        'A_left': report['A_left'],
        'A_right': report['A_right'],
        'B_left': report['B_left'],
        'B_right': report['B_right'],
        'beta': report['beta'],
        'E01_left': list(report['E01_left']),
        'E01_right': list(report['E01_right']),
        'E01_left_kind': _pair_kind(report['E01_left']),
        'E01_right_kind': _pair_kind(report['E01_right']),
        'phi_tilde_dR': report['phi_tilde_dR'],
        'beta_exceptional': report['beta_exceptional'],
        'near_exceptional': report['near_exceptional'],
    }
    _emit(serialize_report(summary), config['out'])
    return EXIT_OK


def cmd_spectrum(config: RunConfig) -> int:
    grid = make_grid(config['R'], config['N'])
    s = solve_for_lambda(config['R'], config['A'], grid=grid)
    report = spectrum_report(s, config['beta'], config['n_max'], config['l_max'])
    payload = {
        'sigma': report['sigma'],
        'E01': None if report['E01'] is None else list(report['E01']),
        'El': report['El'],
        'beta': report['beta'],
        'beta_exceptional': report['beta_exceptional'],
        'state': {'A': s['A'], 'lambda': s['lam'], 'R': s['R']},
    }
    _emit(serialize_report(payload), config['out'])
    return EXIT_OK


def cmd_shape(config: RunConfig) -> int:
    branch = _trace(config)
    report = find_tw_bifurcation(config['R'], branch, beta=config['beta'], l_max=config['l_max'])
    wave = shape(report['root_state'], config['beta'], config['V'], config['samples'])
    export_shape_csv(wave, config['out'] or 'shape.csv')
    plt.close(generate_shape_graph(wave, config['svg'] or 'shape.svg'))

    rho = wave['radius'] - wave['R']
    checks = {
        'even': float(np.max(np.abs(rho[1:] - rho[1:][::-1]))),
        'mean': abs(fourier_projection(wave, 0)),
        'cos1': abs(fourier_projection(wave, 1)),
    }
    summary = {'R': wave['R'], 'beta': wave['beta'], 'V': wave['V'], 'N': config['N'],
               'rho2': wave['rho2'], 'rho3': wave['rho3'], 'lambda0': wave['lambda0'],
               'checks': checks}
    if config['baseline']:
        baseline = {k: summary[k] for k in ('R', 'beta', 'N', 'rho2', 'rho3', 'lambda0')}
        _emit(serialize_report(baseline), config['baseline'])
    _emit(serialize_report(summary), None)
    failed = [name for name, value in checks.items() if value > 1e-10]
    if failed:
        logger.error("shape symmetry checks failed: %s", ", ".join(failed))
        return EXIT_FAILURE
    return EXIT_OK


def cmd_verify(config: RunConfig, perturb: bool = False) -> int:
    results = run_identity_suite(config, perturb=perturb)
    table = pd.DataFrame(results, columns=['name', 'value', 'threshold', 'passed'])
    table['passed'] = table['passed'].map({True: 'PASS', False: 'FAIL'})
    sys.stdout.write(table.to_string(index=False, float_format=lambda v: f'{v:.6g}') + '\n')
    return EXIT_OK if all(r['passed'] for r in results) else EXIT_FAILURE


def cmd_bessel_lemma(config: RunConfig) -> int:
    lemma = bessel_lemma_J(config['R'], config['N'])
    payload = {
        'R': lemma['R'],
        'J': lemma['J'],
        'J_quadrature': lemma['J_quadrature'],
        'w0': float(lemma['w']['values'][0]),
        'exceeds_half': lemma['J'] > 0.5,
    }
    _emit(serialize_report(payload), config['out'])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    epilog = "solver settings:\n" + "\n".join(
        f"  {name}: {text}" for name, text in get_parameter_documentation().items())
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="key=value file with run settings (flags override it)")
    common.add_argument('--R', type=float, help="Disk radius")
    common.add_argument('--N', type=int, help="Radial grid intervals (even, >= 64)")
    common.add_argument('--out', help="Output path (CSV or JSON depending on the command)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', action='store_true', help="Debug logging")
    verbosity.add_argument('--quiet', action='store_true', help="Warnings and errors only")

    branch_args = argparse.ArgumentParser(add_help=False)
    branch_args.add_argument('--a-max', dest='a_max', type=float, help="Largest central value A")
    branch_args.add_argument('--steps', type=int, help="Branch points (>= 32)")

    parser = argparse.ArgumentParser(
        prog='liouville', description="Radial steady states, spectra, bifurcations and "
                                      "traveling-wave shapes of the reduced motility model.",
        epilog=epilog, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('branch', parents=[common, branch_args], help="Trace Lambda(A) and write CSV")
    p.add_argument('--svg', help="Optional SVG plot of Lambda(A)")

    p = sub.add_parser('bifurcate', parents=[common, branch_args], help="Locate the traveling-wave root")
    p.add_argument('--beta', type=float, help="Surface tension")
    p.add_argument('--l-max', dest='l_max', type=int, help="Largest mode for beta_l")

    p = sub.add_parser('spectrum', parents=[common], help="Spectra at one steady state")
    p.add_argument('--A', type=float, help="Central value Phi(0); 0 selects the trivial state")
    p.add_argument('--beta', type=float, help="Surface tension")
    p.add_argument('--n-max', dest='n_max', type=int, help="Largest angular mode n")
    p.add_argument('--l-max', dest='l_max', type=int, help="Eigenvalues per mode and largest l")

    p = sub.add_parser('shape', parents=[common, branch_args], help="Traveling-wave shape CSV and SVG")
    p.add_argument('--beta', type=float, help="Surface tension")
    p.add_argument('--V', type=float, help="Wave speed")
    p.add_argument('--samples', type=int, help="Boundary samples")
    p.add_argument('--svg', help="SVG output path")
    p.add_argument('--baseline', help="Write rho2/rho3 regression baseline JSON here")

    p = sub.add_parser('verify', parents=[common, branch_args], help="Run the identity suite")
    p.add_argument('--perturb', action='store_true', help=argparse.SUPPRESS)

    sub.add_parser('bessel-lemma', parents=[common], help="J(R) of the explicit subsolution")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    flags = {field: getattr(args, dest) for dest, field in _FLAG_FIELDS.items() if hasattr(args, dest)}
    file_values = load_config_file(args.config) if args.config else {}
    config = merge_run_config(file_values, load_env(), flags)
    validate_run_config(config, args.command)
    return config


COMMANDS: Dict[str, Callable[..., int]] = {
    'branch': cmd_branch,
    'bifurcate': cmd_bifurcate,
    'spectrum': cmd_spectrum,
    'shape': cmd_shape,
    'verify': cmd_verify,
    'bessel-lemma': cmd_bessel_lemma,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')

    try:
        config = resolve_config(args)
    except ValueError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE

    command = COMMANDS[args.command]
    try:
        if args.command == 'verify':
            return command(config, perturb=args.perturb)
        return command(config)
    except OSError as exc:
        logger.error("I/O failure on %s: %s", exc.filename, exc.strerror or exc)
        return EXIT_FAILURE
    except ValueError as exc:
        logger.error("%s", exc)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
