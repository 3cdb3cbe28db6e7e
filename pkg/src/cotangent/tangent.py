"""
Linearised cotangent flows for the Poisson path-space lab.
Tangent vectors to the set of cotangent paths and the Lagrangian test of omega on loops.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple
import sys
import os

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import resample

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    BRACKET_TOL,
    COTANGENT_TOL,
    OMEGA_BREAK_AMPLITUDE,
    OMEGA_BREAK_MIN,
    OMEGA_CLOSURE_TOL,
    OMEGA_MODES,
    OMEGA_TRIALS,
)
from geometry.bivector import BivectorField
from pathspace.grid import Grid, differentiate
from pathspace.maps import defect_norm, omega, path_scale
from pathspace.paths import PathSample, TangentVector
from pathspace.sampling import random_covector_series
from utils.logger import BoundaryError, DimensionError, NotCotangentError, log_warning


def _coefficients(pi: BivectorField, q: np.ndarray, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """M_ik = sum_j d_k pi_ij p_j and the matrix pi(q), per row of q."""
    return np.einsum('mkij,mj->mik', pi.derivative_tensors(q), p), pi.matrices(q)


def _at_midpoints(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Values at t_i + h/2 for every interval of the grid (N intervals)."""
    if grid.is_periodic:
        return resample(values, 2 * grid.N, axis=0)[1::2]
    mids = grid.nodes[:-1] + 0.5 * grid.h
    return CubicSpline(grid.nodes, values, axis=0)(mids)


def _closed(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Append the value at t = 1 on loops, so every grid has N + 1 time levels."""
    return np.vstack([values, values[:1]]) if grid.is_periodic else values


def _linear_flow(pi: BivectorField, a: PathSample, dp: np.ndarray, dq0: np.ndarray) -> np.ndarray:
    """RK4 with step h for dq' = M(t) dq + pi(t) dp(t); returns N + 1 levels from t = 0 to t = 1."""
    grid = a.grid
    stacked = np.hstack([a.q, a.p, dp])
    n = a.n
    nodes = _closed(stacked, grid)
    mids = _at_midpoints(stacked, grid)

    def field(data: np.ndarray):
        M, P = _coefficients(pi, data[:, :n], data[:, n:2 * n])
        return M, np.einsum('mij,mj->mi', P, data[:, 2 * n:])

    M_node, c_node = field(nodes)
    M_mid, c_mid = field(mids)

    h = grid.h
    out = np.empty((grid.N + 1, n))
    y = np.array(dq0, dtype=float)
    out[0] = y
    for i in range(grid.N):
        k1 = M_node[i] @ y + c_node[i]
        k2 = M_mid[i] @ (y + 0.5 * h * k1) + c_mid[i]
        k3 = M_mid[i] @ (y + 0.5 * h * k2) + c_mid[i]
        k4 = M_node[i + 1] @ (y + h * k3) + c_node[i + 1]
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return out


def _require_cotangent(pi: BivectorField, a: PathSample) -> None:
    defect = defect_norm(pi, a)
    bound = BRACKET_TOL * path_scale(pi, a)
    if defect > bound:
        raise NotCotangentError(f"Path defect {defect:.3e} exceeds {bound:.1e}", defect=defect)


def linearized_tangent(pi: BivectorField, a: PathSample, dp, dq0) -> TangentVector:
    """
    Tangent vector (dq, dp) to the cotangent paths at a.

    dq solves dq' = (d pi#/dq)(dq)(p) + pi#_q(dp) with dq(0) = dq0.

    Args:
        pi: Bivector field
        a: Cotangent path
        dp: Per-node covector variation
        dq0: Initial value at t = 0

    Returns:
        TangentVector on a's grid

    Raises:
        NotCotangentError: If a is not cotangent
    """
    dp = np.asarray(dp, dtype=float)
    dq0 = np.asarray(dq0, dtype=float)
    if dp.shape != a.p.shape or dq0.shape != (a.n,):
        raise DimensionError("Variation shapes do not match the path", expected=a.p.shape,
                             actual=(dp.shape, dq0.shape))
    _require_cotangent(pi, a)
    levels = _linear_flow(pi, a, dp, dq0)
    return TangentVector(a.grid, levels[:a.grid.size], dp)


def linearized_residual(pi: BivectorField, a: PathSample, d: TangentVector) -> np.ndarray:
    """dq' - (d pi#/dq)(dq)(p) - pi#_q(dp) at every node."""
    if d.grid != a.grid or d.n != a.n:
        raise DimensionError("Tangent vector lives on a different grid or dimension")
    M, P = _coefficients(pi, a.q, a.p)
    return (differentiate(d.dq, a.grid) - np.einsum('mik,mk->mi', M, d.dq)
            - np.einsum('mij,mj->mi', P, d.dp))


# =============================================================================
# Lagrangian test on loops
# =============================================================================

def closed_loop_tangent(pi: BivectorField, a: PathSample, dp: np.ndarray, dq0: np.ndarray
                        ) -> Tuple[TangentVector, float]:
    """
    Add a constant covector c to dp so that the linearised flow closes up.

    The closure gap dq(1) - dq(0) is affine in c; c is its least-squares zero.

    Returns:
        (tangent with dp + c, remaining gap)
    """
    n = a.n

    def gap(shift: np.ndarray) -> np.ndarray:
        return _linear_flow(pi, a, dp + shift, dq0)[-1] - dq0

    base = gap(np.zeros(n))
    columns = np.column_stack([gap(np.eye(n)[k]) - base for k in range(n)])
    shift, *_ = np.linalg.lstsq(columns, -base, rcond=None)
    levels = _linear_flow(pi, a, dp + shift, dq0)
    remaining = float(np.max(np.abs(levels[-1] - dq0)))
    return TangentVector(a.grid, levels[:a.grid.size], dp + shift), remaining


@dataclass
class OmegaTestResult:
    max_abs_omega: float
    broken_omega: float
    kept: int
    non_closing: int
    scale: float

    def passes(self, tol: float = COTANGENT_TOL, break_min: float = OMEGA_BREAK_MIN) -> bool:
        """omega vanishes on the kept pairs while the broken tangent is detected."""
        return (self.kept > 0 and self.max_abs_omega <= tol * self.scale
                and self.broken_omega > break_min * self.scale)

    def to_dict(self) -> Dict:
        return {
            'max_abs_omega': self.max_abs_omega,
            'broken_omega': self.broken_omega,
            'kept': self.kept,
            'non_closing': self.non_closing,
            'scale': self.scale,
        }


def broken_tangent(d: TangentVector, amplitude: float = OMEGA_BREAK_AMPLITUDE) -> TangentVector:
    """Add the loop amplitude * (cos 2 pi t, sin 2 pi t, 0, ...) to dq; the linearised equation no longer holds."""
    t = d.grid.nodes
    loop = np.zeros(d.dq.shape)
    loop[:, 0] = amplitude * np.cos(2.0 * np.pi * t)
    if d.n > 1:
        loop[:, 1] = amplitude * np.sin(2.0 * np.pi * t)
    return d.with_dq(d.dq + loop)


def lagrangian_omega_test(pi: BivectorField, a: PathSample, trials: int = OMEGA_TRIALS, seed: int = 0,
                          modes: int = OMEGA_MODES, rng: Optional[np.random.Generator] = None) -> OmegaTestResult:
    """
    max |omega(d1, d2)| over pairs of closed linearised tangents at a cotangent loop.

    Each trial also pairs a broken copy of d1 with d2; its largest |omega|
    is reported as broken_omega.

    Raises:
        BoundaryError: If a is not a loop
        NotCotangentError: If a is not cotangent
    """
    if not a.grid.is_periodic:
        raise BoundaryError("The omega test runs on loops only", where='grid')
    _require_cotangent(pi, a)
    rng = rng if rng is not None else np.random.default_rng(seed)
    n = a.n

    worst = 0.0
    broken = 0.0
    kept = 0
    non_closing = 0
    for trial in range(trials):
        pair = []
        for _ in range(2):
            dp = random_covector_series(a.grid, n, rng, modes=modes)
            dq0 = rng.uniform(-1.0, 1.0, n)
            tangent, gap = closed_loop_tangent(pi, a, dp, dq0)
            pair.append((tangent, gap))
        if max(gap for _, gap in pair) > OMEGA_CLOSURE_TOL:
            non_closing += 1
            log_warning("Linearised flow does not close", {
                'operation': 'lagrangian_omega_test', 'trial': trial,
                'gap': f"{max(gap for _, gap in pair):.3e}",
            })
            continue
        (d1, _), (d2, _) = pair
        kept += 1
        worst = max(worst, abs(omega(d1, d2)))
        broken = max(broken, abs(omega(broken_tangent(d1), d2)))

    return OmegaTestResult(max_abs_omega=worst, broken_omega=broken, kept=kept,
                           non_closing=non_closing, scale=path_scale(pi, a))
