"""
Command-line surface of the Poisson path-space lab.
Loads bivector fixtures, runs the verification suites and writes reports.
"""

import os
import sys
from typing import Optional

import click

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import (
    BRACKET_TOL,
    COISOTROPY_PATHS,
    COUNTEREXAMPLE_EPS,
    COUNTEREXAMPLE_MODES,
    DEFAULT_GRID_N,
    DEFAULT_POISSON_TOL,
    DEFAULT_SAMPLE_BOX,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SHOOT_EPS,
    EXIT_INPUT_ERROR,
    GRADIENT_CHECK_TRIALS,
    GRID_KINDS,
)
from data.fixtures import fixture_path, load_bivector
from geometry.bivector import BivectorField
from suites import (
    BRACKET_COLUMNS,
    GRADIENT_COLUMNS,
    run_coisotropy,
    run_counterexample,
    run_gradient_check,
    run_jacobi,
)
from utils.logger import BivectorParseError, log_error
from utils.report import VerificationReport, export_report_json, export_rows_csv, render_text


def _load(ctx: click.Context, source: str) -> BivectorField:
    """Read a bivector from a file path or a bundled fixture name; exit 2 on failure."""
    path = source if os.path.exists(source) else fixture_path(source)
    if not os.path.exists(path):
        click.echo(f"error: no bivector file or fixture named {source!r}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)
    try:
        return load_bivector(path)
    except BivectorParseError as e:
        click.echo(f"error: {e.message}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)


def _finish(ctx: click.Context, report: VerificationReport, json_path: Optional[str],
            csv_path: Optional[str] = None, columns=None) -> None:
    click.echo(render_text(report))
    if json_path:
        export_report_json(report, json_path)
    if csv_path:
        export_rows_csv(report, csv_path, columns)
    ctx.exit(report.exit_code)


def _guarded(ctx: click.Context, operation: str, run):
    """Turn parameter errors raised by the numerics into exit code 2."""
    try:
        return run()
    except ValueError as e:
        log_error(e, {'operation': operation})
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)


@click.group()
def cli():
    """Numerical checks of Poisson geometry on path spaces."""


@cli.command()
@click.argument('pi_file')
@click.option('--samples', default=DEFAULT_SAMPLE_COUNT, show_default=True, help='Random sample points.')
@click.option('--tol', default=DEFAULT_POISSON_TOL, show_default=True, help='Threshold on max |J|.')
@click.option('--box', default=DEFAULT_SAMPLE_BOX, show_default=True, help='Half-width of the sampling cube.')
@click.option('--seed', default=0, show_default=True)
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Write the report as JSON.')
@click.pass_context
def jacobi(ctx, pi_file, samples, tol, box, seed, json_path):
    """Sampled Poisson test: exit 0 when the Jacobiator vanishes."""
    pi = _load(ctx, pi_file)
    report = _guarded(ctx, 'jacobi', lambda: run_jacobi(pi, samples, tol, seed, box, source=pi_file))
    _finish(ctx, report, json_path)


@cli.command()
@click.argument('pi_file')
@click.option('--paths', default=COISOTROPY_PATHS, show_default=True, help='Cotangent paths to shoot.')
@click.option('--grid-n', default=DEFAULT_GRID_N, show_default=True, help='Grid intervals (even, >= 8).')
@click.option('--kind', type=click.Choice(GRID_KINDS), default='semifree', show_default=True)
@click.option('--tol', default=BRACKET_TOL, show_default=True, help='Relative bracket tolerance.')
@click.option('--eps', default=DEFAULT_SHOOT_EPS, show_default=True, help='Shooting window half-width.')
@click.option('--seed', default=0, show_default=True)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), help='Write (path, r, s, bracket) rows.')
@click.option('--paths-csv', 'path_dir', type=click.Path(file_okay=False), help='Write every shot path as CSV into this directory.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Write the report as JSON.')
@click.pass_context
def coisotropy(ctx, pi_file, paths, grid_n, kind, tol, eps, seed, csv_path, path_dir, json_path):
    """Brackets of constraint functionals along shot cotangent paths."""
    pi = _load(ctx, pi_file)
    report = _guarded(ctx, 'coisotropy', lambda: run_coisotropy(
        pi, paths=paths, grid_n=grid_n, kind=kind, tol=tol, seed=seed, eps=eps, source=pi_file,
        path_dir=path_dir))
    _finish(ctx, report, json_path, csv_path, BRACKET_COLUMNS)


@cli.command()
@click.option('--eps', default=COUNTEREXAMPLE_EPS, show_default=True, help='First-order displacement.')
@click.option('--modes', default=COUNTEREXAMPLE_MODES, show_default=True, help='Fourier modes in corrections.')
@click.option('--grid-n', default=DEFAULT_GRID_N, show_default=True, help='Loop grid intervals.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Write the report as JSON.')
@click.pass_context
def counterexample(ctx, eps, modes, grid_n, json_path):
    """Tangent cone of cotangent loops for pi = x dx^dy."""
    report = _guarded(ctx, 'counterexample', lambda: run_counterexample(eps, modes, grid_n))
    _finish(ctx, report, json_path)


@cli.command('gradient-check')
@click.argument('pi_file')
@click.option('--trials', default=GRADIENT_CHECK_TRIALS, show_default=True)
@click.option('--kind', type=click.Choice(GRID_KINDS), default='semifree', show_default=True)
@click.option('--grid-n', default=DEFAULT_GRID_N, show_default=True, help='Grid intervals (even, >= 8).')
@click.option('--seed', default=0, show_default=True)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), help='Write per-trial rows.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Write the report as JSON.')
@click.pass_context
def gradient_check(ctx, pi_file, trials, kind, grid_n, seed, csv_path, json_path):
    """Finite-difference directional derivatives against variational gradients."""
    pi = _load(ctx, pi_file)
    report = _guarded(ctx, 'gradient-check', lambda: run_gradient_check(
        pi, trials=trials, seed=seed, kind=kind, grid_n=grid_n, source=pi_file))
    _finish(ctx, report, json_path, csv_path, GRADIENT_COLUMNS)


if __name__ == '__main__':
    cli()
