"""
Flat bump functions for the Poisson path-space lab.
Smooth profiles whose derivatives of every order vanish at the ends of their support.
"""

from functools import lru_cache
import sys
import os

import numpy as np
from scipy.integrate import quad

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pathspace.grid import Grid


def flat_bump(t) -> np.ndarray:
    """b(t) = exp(-1 / (t (1 - t))) on (0, 1), zero elsewhere."""
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    safe = np.where(inside, t, 0.5)
    return np.where(inside, np.exp(-1.0 / (safe * (1.0 - safe))), 0.0)


BUMP_PEAK = float(np.exp(-4.0))


def unit_bump(t) -> np.ndarray:
    """Flat bump rescaled to value 1 at t = 1/2."""
    return flat_bump(t) / BUMP_PEAK


@lru_cache(maxsize=1)
def bump_mass() -> float:
    """Integral of b over [0, 1]."""
    value, _ = quad(lambda s: float(flat_bump(s)), 0.0, 1.0, epsabs=1e-15, epsrel=1e-13)
    return value


def centered_integral(s) -> np.ndarray:
    """Integral of b from 1/2 to s, with s clipped to [0, 1]."""
    s = np.clip(np.atleast_1d(np.asarray(s, dtype=float)), 0.0, 1.0)
    out = np.empty_like(s)
    for i, upper in enumerate(s):
        value, _ = quad(lambda x: float(flat_bump(x)), 0.5, upper, epsabs=1e-15, epsrel=1e-13)
        out[i] = value
    return out


def flat_step(t) -> np.ndarray:
    """Phi(t) = int_0^t b / int_0^1 b: 0 at t = 0, 1 at t = 1, flat at both ends."""
    t = np.asarray(t, dtype=float)
    values = 0.5 + centered_integral(t).reshape(t.shape) / bump_mass()
    return np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, values))


def _inner_coordinate(grid: Grid) -> np.ndarray:
    # maps [m, 1 - m] onto [0, 1], m = grid.flat_margin; node m lands on 0 and node N - m on 1 exactly
    m = grid.flat_nodes
    return (np.arange(grid.size) - m) / (grid.N - 2 * m)


@lru_cache(maxsize=32)
def flat_step_on(grid: Grid) -> np.ndarray:
    """flat_step squeezed into [m, 1 - m], so the first and last flat_nodes nodes hold exact end values."""
    values = flat_step(_inner_coordinate(grid))
    values.setflags(write=False)
    return values


@lru_cache(maxsize=32)
def unit_bump_on(grid: Grid) -> np.ndarray:
    """unit_bump squeezed into [m, 1 - m]; exactly zero on the flat nodes at both ends."""
    values = unit_bump(_inner_coordinate(grid))
    values.setflags(write=False)
    return values


def smooth_transition(x) -> np.ndarray:
    """0 for x <= 0, 1 for x >= 1, smooth and flat at both ends in between."""
    x = np.asarray(x, dtype=float)
    left = np.where(x > 0.0, np.exp(-1.0 / np.where(x > 0.0, x, 1.0)), 0.0)
    right = np.where(x < 1.0, np.exp(-1.0 / np.where(x < 1.0, 1.0 - x, 1.0)), 0.0)
    return left / (left + right)


def plateau(t, inner, outer) -> np.ndarray:
    """Equal to 1 on [inner], 0 outside (outer), smooth transitions between."""
    t = np.asarray(t, dtype=float)
    rise = smooth_transition((t - outer[0]) / (inner[0] - outer[0]))
    fall = smooth_transition((outer[1] - t) / (outer[1] - inner[1]))
    return rise * fall
