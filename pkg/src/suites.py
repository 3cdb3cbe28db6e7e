"""
Verification suites for the Poisson path-space lab.
Each suite runs one family of checks and returns a VerificationReport.
"""

from typing import Dict, Optional
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import (
    BRACKET_TOL,
    COISOTROPY_PATHS,
    COISOTROPY_PROFILE_PAIRS,
    COUNTEREXAMPLE_EPS,
    COUNTEREXAMPLE_EXACT_TOL,
    COUNTEREXAMPLE_MODES,
    DEFAULT_GRID_N,
    DEFAULT_POISSON_TOL,
    DEFAULT_SAMPLE_BOX,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SHOOT_EPS,
    GRADIENT_CHECK_TRIALS,
    GRADIENT_TOL,
    SHOOT_SAMPLE_BOX,
)
from algebra.polynomial import Polynomial
from bracket.canonical import constraint_bracket_closed_form, lie_bracket
from cotangent.counterexample import tangent_cone_probe
from cotangent.shooting import shoot_through
from data.fixtures import export_path_csv
from functionals.families import (
    casimir_functional,
    constraint_functional,
    random_jet_functional,
)
from functionals.local import directional_derivative, gradient, gradient_pairing, relative_gap
from geometry.bivector import BivectorField, is_poisson
from pathspace.grid import Grid
from pathspace.maps import path_scale
from pathspace.sampling import random_path, random_profile, random_tangent, sample_points
from utils.logger import OptimizerDivergence, ShootingError, log_error, log_info
from utils.report import Check, VerificationReport


BRACKET_COLUMNS = ['path', 'r', 's', 'pair', 'bracket', 'closed_form', 'scale']
GRADIENT_COLUMNS = ['trial', 'functional', 'directional', 'pairing', 'relative_error']


def run_jacobi(pi: BivectorField, samples: int = DEFAULT_SAMPLE_COUNT, tol: float = DEFAULT_POISSON_TOL,
               seed: int = 0, box: float = DEFAULT_SAMPLE_BOX, source: str = '') -> VerificationReport:
    """Sampled Jacobiator test over [-box, box]^n."""
    report = VerificationReport('jacobi', {'source': source, 'samples': samples, 'tol': tol, 'box': box}, seed)
    points = sample_points(pi.n, samples, np.random.default_rng(seed), box)
    check = is_poisson(pi, points, tol)
    report.add(Check.upper('max_abs_J', check.max_abs_J, tol, **check.to_dict()))
    return report


def _sum_of_squares(n: int) -> Polynomial:
    h = Polynomial.zero(n)
    for k in range(1, n + 1):
        x = Polynomial.variable(n, k)
        h = h + x * x
    return h


def run_coisotropy(pi: BivectorField, paths: int = COISOTROPY_PATHS, grid_n: int = DEFAULT_GRID_N,
                   kind: str = 'semifree', tol: float = BRACKET_TOL, seed: int = 0,
                   eps: float = DEFAULT_SHOOT_EPS, pairs: int = COISOTROPY_PROFILE_PAIRS,
                   source: str = '', path_dir: Optional[str] = None) -> VerificationReport:
    """
    Brackets of constraint functionals along shot cotangent paths.

    Checks the cotangent defect of every shot path, the bracket of every
    constraint pair (r <= s) against tol * scale, the closed form against the
    quadrature bracket, and the bracket of a Casimir functional with each
    constraint functional. Paths whose flow diverges are skipped with a warning;
    paths above the cotangent tolerance are kept and warned about. With
    path_dir set, every shot path is written there as path_NNN.csv.
    """
    config = {'source': source, 'paths': paths, 'grid_n': grid_n, 'kind': kind, 'tol': tol,
              'eps': eps, 'pairs': pairs}
    report = VerificationReport('coisotropy', config, seed)
    rng = np.random.default_rng(seed)
    grid = Grid(grid_n, kind)
    casimir = casimir_functional(_sum_of_squares(pi.n))
    if path_dir:
        os.makedirs(path_dir, exist_ok=True)

    worst_defect = worst_bracket = worst_closed = worst_casimir = 0.0
    shot_count = 0
    for path_id in range(paths):
        q, p = sample_points(pi.n, 2, rng, SHOOT_SAMPLE_BOX)
        profiles = [(random_profile(grid, rng), random_profile(grid, rng)) for _ in range(pairs)]
        try:
            shot = shoot_through(pi, q, p, eps, grid)
        except ShootingError as e:
            log_error(e, {'operation': 'run_coisotropy', 'path': path_id})
            report.warn(f"path {path_id} skipped: {e.message}", {'path': path_id})
            continue
        a = shot.path
        if not shot.cotangent:
            report.warn(f"path {path_id} is not resolved as cotangent on N = {grid_n}",
                        {'path': path_id, 'defect': shot.defect_max})
        if path_dir:
            export_path_csv(a, os.path.join(path_dir, f"path_{path_id:03d}.csv"))

        shot_count += 1
        scale = path_scale(pi, a)
        worst_defect = max(worst_defect, shot.defect_max / scale)
        for pair_id, (f, g) in enumerate(profiles):
            for r in range(1, pi.n + 1):
                F = constraint_functional(pi, r, f, grid)
                worst_casimir = max(worst_casimir, abs(lie_bracket(casimir, F, a)) / scale)
                for s in range(r, pi.n + 1):
                    G = constraint_functional(pi, s, g, grid)
                    value = lie_bracket(F, G, a)
                    closed = constraint_bracket_closed_form(pi, f, r, g, s, a)
                    worst_bracket = max(worst_bracket, abs(value) / scale)
                    worst_closed = max(worst_closed, relative_gap(value, closed) / scale)
                    report.rows.append({'path': path_id, 'r': r, 's': s, 'pair': pair_id,
                                        'bracket': value, 'closed_form': closed, 'scale': scale})

    if shot_count == 0 and paths > 0:
        report.numerical_failure = True
        report.warn("no path could be shot")
        return report

    report.add(Check.upper('cotangent_defect', worst_defect, tol, paths=shot_count))
    report.add(Check.upper('constraint_bracket', worst_bracket, tol, brackets=len(report.rows)))
    report.add(Check.upper('closed_form_gap', worst_closed, tol))
    report.add(Check.upper('casimir_bracket', worst_casimir, tol))
    return report


def run_counterexample(eps: float = COUNTEREXAMPLE_EPS, modes: int = COUNTEREXAMPLE_MODES,
                       grid_n: int = DEFAULT_GRID_N) -> VerificationReport:
    report = VerificationReport('counterexample', {'eps': eps, 'modes': modes, 'grid_n': grid_n}, 0)
    try:
        probe = tangent_cone_probe(eps, modes, Grid.periodic(grid_n))
    except OptimizerDivergence as e:
        log_error(e, {'operation': 'run_counterexample', 'eps': eps})
        report.numerical_failure = True
        report.warn(f"optimizer diverged: {e.message}", {'iterations': len(e.history)})
        return report

    report.add(Check.upper('res_u', probe.res_u, COUNTEREXAMPLE_EXACT_TOL))
    report.add(Check.upper('res_v', probe.res_v, COUNTEREXAMPLE_EXACT_TOL))
    report.add(Check.lower('res_uv', probe.res_uv, probe.gap_bound))
    report.add(Check.upper('holonomy_uv_gap', abs(probe.holonomy_uv - eps), eps ** 2, holonomy=probe.holonomy_uv))
    return report


def _gradient_candidates(pi: BivectorField, grid: Grid, rng: np.random.Generator, trial: int):
    # Cycle through the three families so every kind is exercised
    family = trial % 3
    if family == 0:
        s = int(rng.integers(1, pi.n + 1))
        return constraint_functional(pi, s, random_profile(grid, rng), grid)
    if family == 1:
        return random_jet_functional(pi.n, rng)
    return casimir_functional(_sum_of_squares(pi.n))


def run_gradient_check(pi: BivectorField, trials: int = GRADIENT_CHECK_TRIALS, seed: int = 0,
                       kind: str = 'semifree', grid_n: int = DEFAULT_GRID_N,
                       source: str = '') -> VerificationReport:
    """Directional derivatives by finite differences against the gradient pairing."""
    config = {'source': source, 'trials': trials, 'kind': kind, 'grid_n': grid_n}
    report = VerificationReport('gradient-check', config, seed)
    rng = np.random.default_rng(seed)
    grid = Grid(grid_n, kind)

    if trials == 0:
        report.warn("no trials requested; the check passes vacuously")
        report.add(Check.upper('gradient_relative_error', 0.0, GRADIENT_TOL, trials=0))
        return report

    worst = 0.0
    boundary = 0.0
    for trial in range(trials):
        F = _gradient_candidates(pi, grid, rng, trial)
        a = random_path(grid, pi.n, rng)
        d = random_tangent(grid, pi.n, rng)
        grad = gradient(F, a)
        oracle = directional_derivative(F, a, d)
        pairing = gradient_pairing(grad, d)
        error = relative_gap(oracle, pairing)
        worst = max(worst, error)
        if grid.is_periodic:
            boundary = max(boundary, float(np.max(np.abs(grad.alpha0))), float(np.max(np.abs(grad.alpha1))))
        report.rows.append({'trial': trial, 'functional': F.label, 'directional': oracle,
                            'pairing': pairing, 'relative_error': error})

    report.add(Check.upper('gradient_relative_error', worst, GRADIENT_TOL, trials=trials))
    if grid.is_periodic:
        report.add(Check.upper('periodic_boundary_terms', boundary, 0.0))
    log_info("Gradient check finished", {'trials': trials, 'worst': f"{worst:.3e}"})
    return report
