"""
Shooting cotangent paths through a prescribed point for the Poisson path-space lab.
Fixed-step RK4 on the reparametrised anchor flow with one Richardson halving.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import COTANGENT_TOL, DEFAULT_SHOOT_EPS, RK4_SUBSTEPS, SHOOT_BLOWUP_NORM
from geometry.bivector import BivectorField, sharp
from pathspace.grid import Grid
from pathspace.maps import Reparametrization, bump_reparam, defect_norm, path_scale
from pathspace.paths import PathSample
from utils.logger import DimensionError, ShootingError, log_warning


RHS = Callable[[float, np.ndarray], np.ndarray]


def rk4(rhs: RHS, y0: np.ndarray, times: np.ndarray, substeps: int = RK4_SUBSTEPS,
        blowup: float = SHOOT_BLOWUP_NORM) -> np.ndarray:
    """
    Classical RK4 through the given times, with substeps per interval.

    Args:
        rhs: Right-hand side f(t, y)
        y0: State at times[0]
        times: Monotone (increasing or decreasing) output times
        substeps: RK4 steps per output interval
        blowup: Norm beyond which the state counts as diverged

    Returns:
        States at every output time, shape (len(times), len(y0))

    Raises:
        ShootingError: On a non-finite state or a norm above blowup
    """
    y = np.array(y0, dtype=float)
    out = np.empty((len(times), y.size))
    out[0] = y
    with np.errstate(over='ignore', invalid='ignore'):
        for i in range(len(times) - 1):
            t = times[i]
            dt = (times[i + 1] - t) / substeps
            for _ in range(substeps):
                k1 = rhs(t, y)
                k2 = rhs(t + dt / 2, y + 0.5 * dt * k1)
                k3 = rhs(t + dt / 2, y + 0.5 * dt * k2)
                k4 = rhs(t + dt, y + dt * k3)
                y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                t = t + dt
            if not np.all(np.isfinite(y)) or np.linalg.norm(y) > blowup:
                raise ShootingError(f"Integration diverged near t = {times[i + 1]:.4f}", t=float(times[i + 1]))
            out[i + 1] = y
    return out


def rk4_two_sided(rhs: RHS, y_mid: np.ndarray, grid: Grid, substeps: int = RK4_SUBSTEPS) -> np.ndarray:
    """Integrate from the node t = 1/2 forward and backward over the grid nodes."""
    nodes = grid.nodes
    mid = grid.mid_index
    forward = rk4(rhs, y_mid, nodes[mid:], substeps)
    backward = rk4(rhs, y_mid, nodes[mid::-1], substeps)
    return np.vstack([backward[::-1], forward[1:]])


def richardson_rk4(rhs: RHS, y_mid: np.ndarray, grid: Grid, substeps: int = RK4_SUBSTEPS):
    """RK4 at substeps and 2 * substeps; returns the extrapolated states and the error estimate."""
    coarse = rk4_two_sided(rhs, y_mid, grid, substeps)
    fine = rk4_two_sided(rhs, y_mid, grid, 2 * substeps)
    correction = (fine - coarse) / 15.0
    return fine + correction, float(np.max(np.abs(correction)))


@dataclass(frozen=True, eq=False)
class ShootResult:
    """Shot path with its defects; cotangent is False when defect_max exceeds COTANGENT_TOL * scale."""
    path: PathSample
    defect_max: float
    through_point_error: float
    integration_error: float = 0.0
    cotangent: bool = True

    def to_dict(self) -> Dict:
        return {
            'defect_max': self.defect_max,
            'through_point_error': self.through_point_error,
            'integration_error': self.integration_error,
            'cotangent': self.cotangent,
        }


def shoot_through(pi: BivectorField, q, p, eps: float = DEFAULT_SHOOT_EPS,
                  grid: Optional[Grid] = None) -> ShootResult:
    """
    Cotangent path a = (y(psi(t)), psi'(t) p) through (q, p) at t = 1/2.

    y solves y' = pi#_y(p) with y(1/2) = q. The composition is integrated
    directly as dq/dt = psi'(t) pi#_q(p), which stays inside the window
    (1/2 - eps, 1/2 + eps) of the original time.

    Args:
        pi: Bivector field
        q: Base point hit at t = 1/2
        p: Covector hit at t = 1/2
        eps: Half-width of the time window, 0 < eps < 1/2
        grid: SemiFree grid for paths, Periodic grid for loops

    Returns:
        ShootResult with the sampled path and its defects

    Raises:
        ShootingError: If the flow diverges inside the window
        BoundaryError: If eps is out of range
    """
    grid = grid or Grid.semi_free()
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != (pi.n,) or p.shape != (pi.n,):
        raise DimensionError(f"Point and covector must lie in R^{pi.n}", expected=pi.n, actual=(q.shape, p.shape))

    reparam = Reparametrization.for_grid(eps, grid)
    _, rate = bump_reparam(eps, grid)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return float(reparam.rate(t)) * sharp(pi, y, p)

    base, integration_error = richardson_rk4(rhs, q, grid)
    path = PathSample(grid, base, np.outer(rate, p))

    mid = grid.mid_index
    through = float(max(np.max(np.abs(path.q[mid] - q)), np.max(np.abs(path.p[mid] - p))))
    defect = defect_norm(pi, path)
    scale = path_scale(pi, path)
    cotangent = bool(defect <= COTANGENT_TOL * scale)
    if not cotangent:
        log_warning("Shot path defect above tolerance", {
            'operation': 'shoot_through', 'defect': f"{defect:.3e}", 'scale': f"{scale:.3g}", 'N': grid.N,
        })

    return ShootResult(path=path, defect_max=defect, through_point_error=through,
                       integration_error=integration_error, cotangent=cotangent)
