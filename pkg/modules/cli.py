"""
Command Line Module

Subcommands: check, sweep, window, radius, range and demo-paper. Machine
readable output goes to stdout; status lines go to stderr.
"""

import csv
import functools
import json
import sys
from typing import List, Optional, Tuple

import click

from .catalog import (REGISTRY, Instance, PositiveMapSpec, check_convex_combo_batch,
                      evaluate_case)
from .config_manager import ConfigManager
from .errors import AccretiveError, InputError
from .linalg_core import Tolerance, load_matrix
from .numrad import DEFAULT_EPS, numerical_radius, range_samples
from .sweep_manager import SweepManager
from .transform import Window
from .verdict import STATUS_NOT_MET, Verdict
from .window_solver import OBJECTIVE_KANTOROVICH, OBJECTIVE_WIDTH, Variant, optimal_window
from .worked_examples import demo_paper, format_table


EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_NOT_MET = 2
EXIT_ERROR = 3


def exit_code(verdict: Verdict) -> int:
    """0 pass (or boundary), 1 fail, 2 hypothesis not met."""
    if verdict.status == STATUS_NOT_MET:
        return EXIT_NOT_MET
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def handle_errors(func):
    """Report AccretiveError on stderr and exit with code 3."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AccretiveError as e:
            click.echo(f"❌ {type(e).__name__}: {e}", err=True)
            click.get_current_context().exit(EXIT_ERROR)
    return wrapper


def parse_dims(text: str) -> Tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError as e:
        raise InputError(f'dims must be comma-separated integers, got {text!r}') from e
    if not dims:
        raise InputError('dims must not be empty')
    return dims


def load_instance(path: str) -> Instance:
    """Instance from a JSON file: a bare instance or a failure artifact."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            obj = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f'Cannot read instance file {path}: {e}') from e
    if isinstance(obj, dict) and 'instance' in obj:
        obj = obj['instance']
    if not isinstance(obj, dict):
        raise InputError(f'Instance file {path} does not hold a JSON object')
    return Instance.from_dict(obj)


def _emit_json(obj):
    click.echo(json.dumps(obj, indent=2))


@click.group()
@click.option('--debug', is_flag=True, envvar='DEBUG_MODE', help='Print per-trial errors during sweeps.')
@click.pass_context
def cli(ctx, debug):
    """Accretive transform toolkit: certified checks of operator and numerical-radius inequalities."""
    ctx.ensure_object(dict)
    ctx.obj['debug'] = debug


@cli.command()
@click.option('--case', 'case_id', default=None, help='Catalog case id, e.g. thm.abs_real.a.')
@click.option('--matrix', 'matrix_file', default=None, help='Matrix JSON file for A.')
@click.option('--matrix-b', 'matrix_b_file', default=None, help='Matrix JSON file for B.')
@click.option('--window', 'window_text', default=None, help='Window "m,M".')
@click.option('--window-b', 'window_b_text', default=None, help='Second window "n,N" (w.product).')
@click.option('--t', 't', type=float, default=0.5, show_default=True, help='Convex-combination weight.')
@click.option('--batch', is_flag=True, help='Evaluate thm.convex_combo over t in {0, .25, .5, .75, 1}.')
@click.option('--alpha', type=float, default=1.0, show_default=True, help='Scale for lem.sqrt_equiv.')
@click.option('--form', type=click.Choice(['minus', 'plus']), default='minus', show_default=True)
@click.option('--phi', 'phi_text', default=None, help='Positive map: trace, state:j or compress:k.')
@click.option('--variant', default=None, help='Variant tag appended to the case id (a, iastar, ainv).')
@click.option('--tol', type=float, default=1e-8, show_default=True, help='Relative tolerance.')
@click.option('--eps', type=float, default=DEFAULT_EPS, show_default=True, help='Numerical radius accuracy.')
@click.option('--instance', 'instance_file', default=None, help='Replay an instance or failure artifact.')
@click.pass_context
@handle_errors
def check(ctx, case_id, matrix_file, matrix_b_file, window_text, window_b_text, t, batch,
          alpha, form, phi_text, variant, tol, eps, instance_file):
    """Evaluate one catalog case and print its Verdict as JSON."""
    tolerance = Tolerance(tol)
    if instance_file:
        instance = load_instance(instance_file)
        case_id = case_id or instance.case_id
    else:
        if not matrix_file:
            raise InputError('check needs --matrix or --instance')
        if not case_id:
            raise InputError('check needs --case')
        A = load_matrix(matrix_file)
        instance = Instance(
            case_id=case_id,
            A=A,
            window=Window.parse(window_text) if window_text else None,
            B=load_matrix(matrix_b_file) if matrix_b_file else None,
            window_b=Window.parse(window_b_text) if window_b_text else None,
            t=t,
            alpha=alpha,
            form=form,
            phi=PositiveMapSpec.parse(phi_text, A.shape[0]) if phi_text else None,
        )
    if not case_id:
        raise InputError('check needs --case')
    if variant:
        suffix = f'.{variant.lower()}'
        if case_id not in REGISTRY:
            case_id = f'{case_id}{suffix}'
        elif not case_id.endswith(suffix):
            raise InputError(f'--variant {variant} conflicts with case {case_id}')
    instance.case_id = case_id

    if batch and case_id == 'thm.convex_combo':
        if instance.window is None:
            raise InputError('Case thm.convex_combo needs a window')
        verdict = check_convex_combo_batch(instance.A, instance.window, tol=tolerance)
    else:
        verdict = evaluate_case(case_id, instance, tolerance, eps)
    _emit_json(verdict.to_dict())
    ctx.exit(exit_code(verdict))


@cli.command()
@click.option('--seed', type=int, default=None, help='Master seed (64-bit unsigned).')
@click.option('--trials', type=int, default=None, help='Trials per case.')
@click.option('--dims', 'dims_text', default=None, help='Comma-separated dimensions, e.g. 2,3,4.')
@click.option('--case', 'case_filter', default=None, help='Case id prefix or glob pattern.')
@click.option('--out', 'out_file', default=None, help='Write the JSON report here instead of stdout.')
@click.option('--csv', 'csv_file', default=None, help='Also write the CSV summary.')
@click.option('--workers', type=int, default=None, help='Worker processes.')
@click.option('--boundary', is_flag=True, help='Exact-boundary suite: fill 1, tol 1e-6.')
@click.option('--fill', type=float, default=None, help='Generator fill in (0, 1].')
@click.option('--tol', type=float, default=None, help='Relative tolerance.')
@click.option('--eps', type=float, default=None, help='Numerical radius accuracy.')
@click.option('--failure-dir', default=None, help='Directory for failure artifacts.')
@click.option('--config', 'config_file', default='sweep_config.json', envvar='CONFIG_FILE',
              show_default=True, help='JSON settings file.')
@click.pass_context
@handle_errors
def sweep(ctx, seed, trials, dims_text, case_filter, out_file, csv_file, workers, boundary,
          fill, tol, eps, failure_dir, config_file):
    """Run a deterministic randomized sweep over the catalog."""
    config_manager = ConfigManager(config_file)
    if not config_manager.is_config_valid():
        for section, problems in config_manager.validate_config().items():
            for problem in problems:
                click.echo(f"⚠️  {section}: {problem}", err=True)
    config = config_manager.build_sweep_config(
        master_seed=seed,
        trials=trials,
        dims=parse_dims(dims_text) if dims_text else None,
        case_filter=case_filter,
        workers=workers,
        boundary=True if boundary else None,
        fill=fill,
        tol_rel=tol,
        eps=eps,
        failure_dir=failure_dir,
    )
    debug = ctx.obj.get('debug') or config_manager.debug_mode
    report = SweepManager(config, debug=debug).run_sweep()

    if out_file:
        report.write(out_file)
        click.echo(f"📁 Report written: {out_file}", err=True)
    else:
        click.echo(report.to_json())
    if csv_file:
        report.write_csv(csv_file)
        click.echo(f"📁 CSV written: {csv_file}", err=True)
    ctx.exit(EXIT_FAIL if report.total_failures else EXIT_PASS)


@cli.command()
@click.option('--matrix', 'matrix_file', required=True, help='Matrix JSON file.')
@click.option('--variant', default=None,
              help='A, iAstar, iA, Ainv, absA or absIAstar (default from settings).')
@click.option('--pad', type=float, default=None, help='Relative enlargement of r (default from settings).')
@click.option('--objective', type=click.Choice([OBJECTIVE_KANTOROVICH, OBJECTIVE_WIDTH]), default=None,
              help='Search objective (default from settings).')
@click.option('--config', 'config_file', default='sweep_config.json', envvar='CONFIG_FILE',
              show_default=True, help='JSON settings file.')
@handle_errors
def window(matrix_file, variant, pad, objective, config_file):
    """Find the (m, M) window minimizing K and print it as JSON."""
    settings = ConfigManager(config_file).get_window_settings()
    result = optimal_window(
        load_matrix(matrix_file),
        Variant.parse(settings['variant'] if variant is None else variant),
        settings['pad'] if pad is None else pad,
        settings['objective'] if objective is None else objective,
    )
    _emit_json(result.to_dict())


@cli.command()
@click.option('--matrix', 'matrix_file', required=True, help='Matrix JSON file.')
@click.option('--eps', type=float, default=None, help='Relative accuracy (default from settings).')
@click.option('--intervals', type=int, default=None, help='Starting grid size (default from settings).')
@click.option('--config', 'config_file', default='sweep_config.json', envvar='CONFIG_FILE',
              show_default=True, help='JSON settings file.')
@handle_errors
def radius(matrix_file, eps, intervals, config_file):
    """Certified enclosure of the numerical radius."""
    settings = ConfigManager(config_file).get_numrad_settings()
    eps = settings['eps'] if eps is None else eps
    intervals = settings['initial_intervals'] if intervals is None else intervals
    _emit_json(numerical_radius(load_matrix(matrix_file), eps, intervals).to_dict())


@cli.command(name='range')
@click.option('--matrix', 'matrix_file', required=True, help='Matrix JSON file.')
@click.option('--count', type=int, default=360, show_default=True, help='Number of boundary points.')
@handle_errors
def range_command(matrix_file, count):
    """Boundary points of the numerical range as CSV theta,re,im."""
    points = range_samples(load_matrix(matrix_file), count)
    writer = csv.writer(sys.stdout, lineterminator='\n')
    writer.writerow(['theta', 're', 'im'])
    for point in points:
        writer.writerow([repr(point.theta), repr(point.z.real), repr(point.z.imag)])


@cli.command(name='demo-paper')
@click.pass_context
@handle_errors
def demo_paper_command(ctx):
    """Reproduce the worked examples; table on stderr, JSON on stdout."""
    report = demo_paper()
    click.echo(format_table(report), err=True)
    _emit_json(report.to_dict())
    ctx.exit(EXIT_PASS if report.all_ok else EXIT_FAIL)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; command-line usage errors also map to exit code 3."""
    try:
        return cli.main(args=argv, prog_name='accretive', standalone_mode=False) or EXIT_PASS
    except click.exceptions.Abort:
        click.echo("\n👋 Aborted", err=True)
        return EXIT_ERROR
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
