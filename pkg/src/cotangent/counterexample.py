"""
Tangent-cone probe for cotangent loops of pi = x dx^dy in the Poisson path-space lab.
Projected Gauss-Newton over periodic corrections of size eps^2.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    COUNTEREXAMPLE_EXACT_TOL,
    COUNTEREXAMPLE_GAP_FACTOR,
    COUNTEREXAMPLE_MODES,
    GN_DIVERGENCE_FACTOR,
    GN_ITERATIONS,
    GN_RESIDUAL_TOL,
    GN_STEP_TOL,
)
from algebra.polynomial import Polynomial
from geometry.bivector import BivectorField
from pathspace.grid import Grid, integrate
from pathspace.maps import cotangent_defect
from pathspace.paths import PathSample
from utils.logger import BoundaryError, OptimizerDivergence, log_info


# State components (x, y, a, b): base point (x, y), covector (a, b)
DIRECTIONS = {
    'u': np.array([1.0, 0.0, 0.0, 0.0]),
    'v': np.array([0.0, 0.0, 0.0, 1.0]),
    'u+v': np.array([1.0, 0.0, 0.0, 1.0]),
}


def x_dx_dy() -> BivectorField:
    """pi = x dx ^ dy on R^2."""
    return BivectorField(2, {(1, 2): Polynomial.variable(2, 1)})


def _fourier_basis(grid: Grid, modes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Columns cos(2 pi m t), sin(2 pi m t) for m = 1..modes, with their time derivatives."""
    t = grid.nodes[:, None]
    m = np.arange(1, modes + 1)[None, :]
    arg = 2.0 * np.pi * m * t
    basis = np.hstack([np.cos(arg), np.sin(arg)])
    rate = np.hstack([-2.0 * np.pi * m * np.sin(arg), 2.0 * np.pi * m * np.cos(arg)])
    return basis, rate


@dataclass
class DirectionFit:
    residual: float
    holonomy: float
    history: List[float] = field(default_factory=list)


@dataclass
class ProbeResult:
    eps: float
    modes: int
    res_u: float
    res_v: float
    res_uv: float
    holonomy_uv: float
    histories: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def gap_bound(self) -> float:
        return COUNTEREXAMPLE_GAP_FACTOR * self.eps ** 2

    def passes(self, exact_tol: float = COUNTEREXAMPLE_EXACT_TOL) -> bool:
        return self.res_u <= exact_tol and self.res_v <= exact_tol and self.res_uv >= self.gap_bound

    def to_dict(self) -> Dict:
        return {
            'eps': self.eps,
            'modes': self.modes,
            'res_u': self.res_u,
            'res_v': self.res_v,
            'res_uv': self.res_uv,
            'holonomy_uv': self.holonomy_uv,
            'gap_bound': self.gap_bound,
            'iterations': {name: len(h) for name, h in self.histories.items()},
        }


class _LoopFit:
    """Residual phi(eps * w + B theta) and its Jacobian in the Fourier coefficients theta."""

    def __init__(self, pi: BivectorField, grid: Grid, eps: float, direction: np.ndarray, modes: int):
        self.pi = pi
        self.grid = grid
        self.offset = eps * direction
        self.basis, self.rate = _fourier_basis(grid, modes)
        self.width = self.basis.shape[1]

    def state(self, theta: np.ndarray) -> np.ndarray:
        return self.offset + self.basis @ theta.reshape(4, self.width).T

    def residual(self, theta: np.ndarray) -> np.ndarray:
        z = self.state(theta)
        loop = PathSample(self.grid, z[:, :2], z[:, 2:])
        return cotangent_defect(self.pi, loop)

    def jacobian(self, theta: np.ndarray) -> np.ndarray:
        # phi_1 = x' - x b, phi_2 = y' + x a
        x, _, a, b = self.state(theta).T
        B, R = self.basis, self.rate
        zero = np.zeros_like(B)
        top = np.hstack([R - b[:, None] * B, zero, zero, -x[:, None] * B])
        bottom = np.hstack([a[:, None] * B, R, x[:, None] * B, zero])
        return np.vstack([top, bottom])


def _projected_gauss_newton(fit: _LoopFit, box: float, iterations: int) -> Tuple[np.ndarray, List[float]]:
    """Stops once the residual is below GN_RESIDUAL_TOL or the step below GN_STEP_TOL * box."""
    theta = np.zeros(4 * fit.width)
    r = fit.residual(theta)
    best, best_norm = theta.copy(), float(np.max(np.abs(r)))
    history = [best_norm]
    ceiling = GN_DIVERGENCE_FACTOR * max(best_norm, box)

    for _ in range(iterations):
        if history[-1] <= GN_RESIDUAL_TOL:
            break
        step, *_ = np.linalg.lstsq(fit.jacobian(theta), -r.T.ravel(), rcond=None)
        if np.max(np.abs(step)) <= GN_STEP_TOL * box:
            break
        clipped = np.clip(theta + step, -box, box)
        if np.array_equal(clipped, theta):
            break
        theta = clipped
        r = fit.residual(theta)
        norm = float(np.max(np.abs(r)))
        history.append(norm)
        if not np.isfinite(norm) or norm > ceiling:
            raise OptimizerDivergence(f"Gauss-Newton residual reached {norm:.3e}", history=history)
        if norm < best_norm:
            best, best_norm = theta.copy(), norm
    return best, history


def tangent_cone_probe(eps: float, modes: int = COUNTEREXAMPLE_MODES, grid: Optional[Grid] = None,
                       iterations: int = GN_ITERATIONS) -> ProbeResult:
    """
    Search for cotangent loops of pi = x dx^dy near c + eps * w for w in {u, v, u + v}.

    c is the constant zero loop, u moves x and v moves b. Corrections are
    Fourier modes 1..modes with coefficients in [-eps^2, eps^2], so the
    candidates share the first-order jet eps * w.

    Args:
        eps: Size of the first-order displacement, 0 < eps <= 0.1
        modes: Number of Fourier modes in the correction, >= 4
        grid: Periodic grid
        iterations: Gauss-Newton iterations

    Returns:
        ProbeResult with the sup-norm residual per direction and the holonomy of b for u + v

    Raises:
        OptimizerDivergence: With the residual history when the iterates blow up
    """
    grid = grid or Grid.periodic()
    if not grid.is_periodic:
        raise BoundaryError("The tangent-cone probe runs on loops", where='grid')
    if not 0.0 < eps <= 0.1:
        raise BoundaryError(f"eps must lie in (0, 0.1], got {eps}", where='eps')
    if modes < 4 or 2 * modes >= grid.N:
        raise BoundaryError(f"modes must lie in [4, N/2), got {modes}", where='modes')

    pi = x_dx_dy()
    box = eps ** 2
    fits: Dict[str, DirectionFit] = {}
    for name, direction in DIRECTIONS.items():
        fit = _LoopFit(pi, grid, eps, direction, modes)
        theta, history = _projected_gauss_newton(fit, box, iterations)
        state = fit.state(theta)
        fits[name] = DirectionFit(
            residual=float(np.max(np.abs(fit.residual(theta)))),
            holonomy=integrate(state[:, 3], grid),
            history=history,
        )
        log_info("Tangent-cone probe", {'direction': name, 'eps': eps, 'residual': f"{fits[name].residual:.3e}"})

    return ProbeResult(
        eps=eps,
        modes=modes,
        res_u=fits['u'].residual,
        res_v=fits['v'].residual,
        res_uv=fits['u+v'].residual,
        holonomy_uv=fits['u+v'].holonomy,
        histories={name: fit.history for name, fit in fits.items()},
    )
