"""
Maps on path space for the Poisson path-space lab.
The cotangent defect, the 2-form omega and the reparametrisations used to shoot cotangent paths.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple
import math
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import BUMP_RANGE_FRACTION, COTANGENT_TOL
from geometry.bivector import BivectorField, coefficient_sup, sharp_many
from pathspace.bumps import BUMP_PEAK, bump_mass, centered_integral, flat_bump
from pathspace.grid import Grid, GridKind, differentiate, integrate
from pathspace.paths import PathSample, TangentVector
from utils.logger import BoundaryError, DimensionError


def cotangent_defect(pi: BivectorField, a: PathSample) -> np.ndarray:
    """
    phi(a) = q' - pi#_q(p) at every node.

    Args:
        pi: Bivector field on R^n
        a: Sampled path

    Returns:
        Array of shape (grid.size, n)
    """
    if pi.n != a.n:
        raise DimensionError(f"Path in R^{a.n} for a bivector on R^{pi.n}", expected=pi.n, actual=a.n)
    return a.q_prime() - sharp_many(pi, a.q, a.p)


def defect_norm(pi: BivectorField, a: PathSample) -> float:
    """Largest node-wise Euclidean norm of the cotangent defect."""
    return float(np.max(np.linalg.norm(cotangent_defect(pi, a), axis=1)))


def is_cotangent(pi: BivectorField, a: PathSample, tol: float = COTANGENT_TOL) -> bool:
    return defect_norm(pi, a) <= tol


def path_scale(pi: BivectorField, a: PathSample) -> float:
    """max(1, |p|_inf, sup |pi_ij| along the base path): the unit for relative tolerances."""
    return max(1.0, float(np.max(np.abs(a.p))), coefficient_sup(pi, a.q))


def omega(d1: TangentVector, d2: TangentVector) -> float:
    """omega(d1, d2) = int <dp1, dq2> - <dp2, dq1> dt."""
    if d1.grid != d2.grid or d1.n != d2.n:
        raise DimensionError("Tangent vectors live on different grids or dimensions",
                             expected=(d1.grid, d1.n), actual=(d2.grid, d2.n))
    integrand = np.sum(d1.dp * d2.dq, axis=1) - np.sum(d2.dp * d1.dq, axis=1)
    return integrate(integrand, d1.grid)


# =============================================================================
# Reparametrisation psi
# =============================================================================

@dataclass(frozen=True)
class Reparametrization:
    """
    psi: [0, 1] -> (1/2 - eps, 1/2 + eps) with psi(1/2) = 1/2 and psi'(1/2) = 1.

    SemiFree: psi' is the flat bump supported on [1/2 - w, 1/2 + w], so psi' and
    all its derivatives vanish at t = 0 and t = 1. w never exceeds 1/2 - margin,
    so psi' is exactly zero on [0, margin] and [1 - margin, 1]. Periodic: psi(t) = 1/2 +
    sin(2 pi k (t - 1/2)) / (2 pi k), a loop in the interval.
    """
    eps: float
    kind: GridKind
    margin: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.eps < 0.5:
            raise BoundaryError(f"eps must lie in (0, 1/2), got {self.eps}", where='eps')
        if not 0.0 <= self.margin < 0.5:
            raise BoundaryError(f"margin must lie in [0, 1/2), got {self.margin}", where='margin')

    @classmethod
    def for_grid(cls, eps: float, grid: Grid) -> 'Reparametrization':
        """psi whose rate is zero on the grid's flat nodes."""
        return cls(eps, grid.kind, grid.flat_margin)

    @property
    def half_width(self) -> float:
        """Support half-width w of psi' on semi-free grids."""
        spread = bump_mass() / BUMP_PEAK
        return min(0.5 - self.margin, BUMP_RANGE_FRACTION * self.eps / spread)

    @property
    def frequency(self) -> int:
        """Winding k of the periodic variant."""
        return max(1, math.ceil(1.0 / (2.0 * math.pi * BUMP_RANGE_FRACTION * self.eps)))

    def _local(self, t) -> np.ndarray:
        w = self.half_width
        return (np.asarray(t, dtype=float) - 0.5) / (2.0 * w) + 0.5

    def psi(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind is GridKind.PERIODIC:
            k = self.frequency
            return 0.5 + np.sin(2.0 * np.pi * k * (t - 0.5)) / (2.0 * np.pi * k)
        w = self.half_width
        return 0.5 + 2.0 * w * centered_integral(self._local(t)).reshape(t.shape) / BUMP_PEAK

    def rate(self, t) -> np.ndarray:
        """psi'(t)."""
        t = np.asarray(t, dtype=float)
        if self.kind is GridKind.PERIODIC:
            return np.cos(2.0 * np.pi * self.frequency * (t - 0.5))
        return flat_bump(self._local(t)) / BUMP_PEAK


def bump_reparam(eps: float, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sample psi and psi' on the grid nodes.

    Args:
        eps: Half-width of the target interval, 0 < eps < 1/2
        grid: Grid whose kind selects the semi-free or periodic construction

    Returns:
        (psi, psi') as arrays of length grid.size
    """
    return _sampled_reparam(float(eps), grid)


@lru_cache(maxsize=16)
def _sampled_reparam(eps: float, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    reparam = Reparametrization.for_grid(eps, grid)
    psi, rate = reparam.psi(grid.nodes), reparam.rate(grid.nodes)
    psi.setflags(write=False)
    rate.setflags(write=False)
    return psi, rate


def reparam_derivatives(eps: float, grid: Grid, max_order: int = 4) -> np.ndarray:
    """Sampled derivatives psi', psi'', ... at both ends, shape (max_order, 2)."""
    _, rate = bump_reparam(eps, grid)
    out = np.zeros((max_order, 2))
    values = rate
    for order in range(max_order):
        out[order] = [values[0], values[-1]]
        values = differentiate(values, grid)
    return out
