"""
Dirac-family limit experiment for the Poisson path-space lab.
Brackets of constraint functionals concentrated at t = 1/2 along a shot cotangent path.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    DEFAULT_SHOOT_EPS,
    DIRAC_CENTER,
    DIRAC_DEFAULT_DS,
    DIRAC_LIMIT_REL_TOL,
    DIRAC_POISSON_TOL,
    PLATEAU_INNER,
    PLATEAU_OUTER,
)
from bracket.canonical import lie_bracket
from cotangent.shooting import ShootResult, shoot_through
from functionals.families import constraint_functional
from geometry.bivector import BivectorField, jacobiator
from pathspace.bumps import flat_bump, plateau
from pathspace.grid import Grid, integrate
from pathspace.maps import path_scale
from utils.logger import BoundaryError, log_info


def dirac_family(d: int, center: float = DIRAC_CENTER, grid: Optional[Grid] = None) -> np.ndarray:
    """
    Flat bump supported on [center - 1/d, center + 1/d] with unit grid integral.

    Args:
        d: Concentration, d >= 1
        center: Peak location inside (0, 1)
        grid: Sampling grid

    Returns:
        Profile values on the grid nodes
    """
    grid = grid or Grid.semi_free()
    if d < 1:
        raise BoundaryError(f"Dirac index must be >= 1, got {d}", where='d')
    half = 1.0 / d
    if center - half < 0.0 or center + half > 1.0:
        raise BoundaryError(f"Support [{center - half:.3f}, {center + half:.3f}] leaves [0, 1]", where='d')
    if 2.0 * half < 4.0 * grid.h:
        raise BoundaryError(f"Support of width {2 * half:.3g} is not resolved by N = {grid.N}", where='d')

    values = flat_bump((grid.nodes - center) / (2.0 * half) + 0.5)
    return values / integrate(values, grid)


def plateau_profile(grid: Grid, inner=PLATEAU_INNER, outer=PLATEAU_OUTER) -> np.ndarray:
    """g: 1 on the inner interval, 0 outside the outer one."""
    return plateau(grid.nodes, inner, outer)


@dataclass
class DiracLimit:
    ds: List[int]
    values: List[float]
    expected: float
    scale: float
    shot: Dict = field(default_factory=dict)

    def relative_gap(self) -> float:
        """|last value - expected| relative to max(1, |expected|)."""
        return abs(self.values[-1] - self.expected) / max(1.0, abs(self.expected))

    def converged(self, tol: float = DIRAC_LIMIT_REL_TOL) -> bool:
        return self.relative_gap() <= tol

    def stays_small(self, tol: float = DIRAC_POISSON_TOL) -> bool:
        """Every value within tol * scale of zero, as expected for Poisson pi."""
        return max(abs(v) for v in self.values) <= tol * self.scale

    def to_dict(self) -> Dict:
        return {
            'ds': list(self.ds),
            'values': [float(v) for v in self.values],
            'expected': float(self.expected),
            'scale': float(self.scale),
            'shot': self.shot,
        }


def dirac_limit_bracket(pi: BivectorField, r: int, s: int, q, p, d_list: Sequence[int] = DIRAC_DEFAULT_DS,
                        grid: Optional[Grid] = None, eps: float = DEFAULT_SHOOT_EPS) -> DiracLimit:
    """
    {F_{f_d, r}, G_{g, s}}(a) along the cotangent path shot through (q, p).

    The sequence tends to sum_j J_rsj(q) p_j as d grows, with the sign of
    the closed-form bracket.

    Raises:
        ShootingError: If the path cannot be shot
    """
    grid = grid or Grid.semi_free()
    shot: ShootResult = shoot_through(pi, q, p, eps, grid)
    a = shot.path
    g = constraint_functional(pi, s, plateau_profile(grid), grid)

    values = []
    for d in d_list:
        f = constraint_functional(pi, r, dirac_family(d, DIRAC_CENTER, grid), grid)
        values.append(lie_bracket(f, g, a))

    expected = float(jacobiator(pi, q).entries[r - 1, s - 1, :] @ np.asarray(p, dtype=float))
    log_info("Dirac limit", {'r': r, 's': s, 'last': f"{values[-1]:.6g}", 'expected': f"{expected:.6g}"})
    return DiracLimit(ds=list(d_list), values=values, expected=expected,
                      scale=path_scale(pi, a), shot=shot.to_dict())
