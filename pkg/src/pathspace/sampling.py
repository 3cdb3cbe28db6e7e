"""
Seeded random samplers for the Poisson path-space lab.
Points, paths, tangent vectors and profiles that satisfy the boundary rules of their grid.
"""

from typing import Optional
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import DEFAULT_SAMPLE_BOX, DEFAULT_SAMPLE_COUNT
from pathspace.bumps import flat_step_on, unit_bump_on
from pathspace.grid import Grid
from pathspace.paths import PathSample, TangentVector


def sample_points(n: int, count: int = DEFAULT_SAMPLE_COUNT, rng: Optional[np.random.Generator] = None,
                  box: float = DEFAULT_SAMPLE_BOX) -> np.ndarray:
    """Uniform points in [-box, box]^n, shape (count, n)."""
    rng = rng if rng is not None else np.random.default_rng(0)
    return rng.uniform(-box, box, size=(count, n))


def _series(t: np.ndarray, coefs: np.ndarray, basis) -> np.ndarray:
    # coefs has shape (modes, n); basis(m, t) gives the m-th mode
    return sum(np.outer(basis(m + 1, t), coefs[m]) for m in range(coefs.shape[0]))


def _trig_loop(t: np.ndarray, n: int, rng: np.random.Generator, amplitude: float, modes: int) -> np.ndarray:
    values = np.tile(rng.uniform(-amplitude, amplitude, n), (t.size, 1))
    cos_c = rng.uniform(-amplitude, amplitude, (modes, n))
    sin_c = rng.uniform(-amplitude, amplitude, (modes, n))
    values = values + _series(t, cos_c, lambda m, s: np.cos(2.0 * np.pi * m * s))
    values = values + _series(t, sin_c, lambda m, s: np.sin(2.0 * np.pi * m * s))
    return values


def _flat_free(grid: Grid, n: int, rng: np.random.Generator, amplitude: float, modes: int) -> np.ndarray:
    """Endpoint values joined by the flat step, plus a bump-damped sine series."""
    t = grid.nodes
    start = rng.uniform(-amplitude, amplitude, n)
    end = rng.uniform(-amplitude, amplitude, n)
    coefs = rng.uniform(-amplitude, amplitude, (modes, n))
    values = start + np.outer(flat_step_on(grid), end - start)
    return values + unit_bump_on(grid)[:, None] * _series(t, coefs, lambda m, s: np.sin(np.pi * m * s))


def _flat_pinned(grid: Grid, n: int, rng: np.random.Generator, amplitude: float, modes: int) -> np.ndarray:
    """Bump-damped cosine series: zero with all sampled derivatives at both ends."""
    t = grid.nodes
    coefs = rng.uniform(-amplitude, amplitude, (modes + 1, n))
    series = coefs[0] + _series(t, coefs[1:], lambda m, s: np.cos(np.pi * m * s))
    return unit_bump_on(grid)[:, None] * series


def random_path(grid: Grid, n: int, rng: np.random.Generator, amplitude: float = 0.5, modes: int = 2) -> PathSample:
    """
    Random smooth path of the grid's kind.

    Args:
        grid: Target grid
        n: Dimension of the base
        rng: Seeded generator
        amplitude: Bound on every random coefficient
        modes: Number of Fourier modes per component

    Returns:
        PathSample that passes the semi-free endpoint checks on SemiFree grids
    """
    if grid.is_periodic:
        t = grid.nodes
        return PathSample(grid, _trig_loop(t, n, rng, amplitude, modes), _trig_loop(t, n, rng, amplitude, modes))
    return PathSample(grid, _flat_free(grid, n, rng, amplitude, modes), _flat_pinned(grid, n, rng, amplitude, modes))


def random_tangent(grid: Grid, n: int, rng: np.random.Generator, amplitude: float = 0.5, modes: int = 2) -> TangentVector:
    """Random admissible tangent: on SemiFree grids dq is free at the ends but flat, dp is pinned."""
    if grid.is_periodic:
        t = grid.nodes
        return TangentVector(grid, _trig_loop(t, n, rng, amplitude, modes), _trig_loop(t, n, rng, amplitude, modes))
    return TangentVector(grid, _flat_free(grid, n, rng, amplitude, modes), _flat_pinned(grid, n, rng, amplitude, modes))


def random_profile(grid: Grid, rng: np.random.Generator, amplitude: float = 1.0, modes: int = 2) -> np.ndarray:
    """Scalar profile f(t); vanishes with its sampled derivatives at the ends of SemiFree grids."""
    if grid.is_periodic:
        return _trig_loop(grid.nodes, 1, rng, amplitude, modes)[:, 0]
    return _flat_pinned(grid, 1, rng, amplitude, modes)[:, 0]


def random_covector_series(grid: Grid, n: int, rng: np.random.Generator, amplitude: float = 1.0,
                           modes: int = 3) -> np.ndarray:
    """Zero-mean trigonometric covector field, the variations fed to linearized flows on loops."""
    t = grid.nodes
    cos_c = rng.uniform(-amplitude, amplitude, (modes, n))
    sin_c = rng.uniform(-amplitude, amplitude, (modes, n))
    return (_series(t, cos_c, lambda m, s: np.cos(2.0 * np.pi * m * s))
            + _series(t, sin_c, lambda m, s: np.sin(2.0 * np.pi * m * s)))


def symplectic_circle_loop(grid: Grid, radius: float = 1.0) -> PathSample:
    """
    Cotangent loop of pi_12 = 1 on R^2: q = r (cos 2 pi t, sin 2 pi t), p = -2 pi r (cos 2 pi t, sin 2 pi t).

    p solves q' = pi#(p) exactly, so <p, q'> vanishes pointwise.
    """
    t = grid.nodes
    circle = np.column_stack([np.cos(2.0 * np.pi * t), np.sin(2.0 * np.pi * t)])
    return PathSample(grid, radius * circle, -2.0 * np.pi * radius * circle, validate=False)
