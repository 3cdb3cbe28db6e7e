"""
Sampled paths and tangent vectors for the Poisson path-space lab.
A path a = (q, p) in T*M = M x R^n is stored node-wise on a Grid.
"""

from dataclasses import dataclass, field
from typing import Dict
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import SEMI_FREE_ENDPOINT_TOL
from pathspace.grid import Grid, differentiate
from utils.logger import BoundaryError, DimensionError


def _node_array(values, grid: Grid, name: str) -> np.ndarray:
    values = np.array(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2 or values.shape[0] != grid.size:
        raise DimensionError(
            f"{name} has shape {values.shape}, expected ({grid.size}, n)",
            expected=(grid.size, 'n'), actual=values.shape
        )
    values.setflags(write=False)
    return values


def end_slope(values, grid: Grid) -> float:
    """
    Max |x_k - x_0| / (k h) over the grid's flat nodes k = 1..m, at both ends.

    Zero exactly when the data is constant on the nodes the one-sided
    derivative stencils read; loops have no ends and return 0.
    """
    m = grid.flat_nodes
    if m == 0:
        return 0.0
    values = np.asarray(values, dtype=float).reshape(grid.size, -1)
    steps = np.arange(1, m + 1)[:, None] * grid.h
    head = np.abs(values[1:m + 1] - values[0]) / steps
    tail = np.abs(values[-2:-m - 2:-1] - values[-1]) / steps
    return float(max(np.max(head), np.max(tail)))


@dataclass(frozen=True, eq=False)
class PathSample:
    """
    Discretized path a = (q, p): base points q and covectors p per node.

    On SemiFree grids p must vanish exactly at t = 0 and t = 1, and q and p must
    be flat on the grid's flat nodes at both ends: end_slope stays below
    SEMI_FREE_ENDPOINT_TOL (scaled by the path amplitude).
    """
    grid: Grid
    q: np.ndarray
    p: np.ndarray
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        q = _node_array(self.q, self.grid, 'q')
        p = _node_array(self.p, self.grid, 'p')
        if q.shape != p.shape:
            raise DimensionError(f"q {q.shape} and p {p.shape} differ", expected=q.shape, actual=p.shape)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'p', p)
        if self.validate and not self.grid.is_periodic:
            self._check_semi_free()

    def _check_semi_free(self) -> None:
        if np.any(self.p[0] != 0.0) or np.any(self.p[-1] != 0.0):
            raise BoundaryError("Semi-free path must start and end on the zero section", where='p')
        bound = SEMI_FREE_ENDPOINT_TOL * max(1.0, float(np.max(np.abs(self.q))), float(np.max(np.abs(self.p))))
        worst = max(end_slope(self.q, self.grid), end_slope(self.p, self.grid))
        if worst > bound:
            raise BoundaryError(
                f"Semi-free path has end slope {worst:.3e} above {bound:.1e}", where='endpoints'
            )

    @property
    def n(self) -> int:
        return self.q.shape[1]

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def q_prime(self) -> np.ndarray:
        return differentiate(self.q, self.grid)

    def p_prime(self) -> np.ndarray:
        return differentiate(self.p, self.grid)

    def endpoint_derivatives(self, max_order: int = 4) -> Dict[int, float]:
        """Max |d^k/dt^k| of q and p over both ends, for k = 1..max_order (semi-free grids)."""
        out: Dict[int, float] = {}
        q, p = self.q, self.p
        for order in range(1, max_order + 1):
            q = differentiate(q, self.grid)
            p = differentiate(p, self.grid)
            ends = np.concatenate([q[0], q[-1], p[0], p[-1]])
            out[order] = float(np.max(np.abs(ends)))
        return out

    def perturbed(self, d: 'TangentVector', eps: float) -> 'PathSample':
        """a + eps * d on the same grid."""
        if d.grid != self.grid or d.n != self.n:
            raise DimensionError("Tangent vector lives on a different grid or dimension")
        return PathSample(self.grid, self.q + eps * d.dq, self.p + eps * d.dp)

    def node(self, index: int):
        return self.q[index].copy(), self.p[index].copy()


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Per-node variation (dq, dp) of a path."""
    grid: Grid
    dq: np.ndarray
    dp: np.ndarray

    def __post_init__(self):
        dq = _node_array(self.dq, self.grid, 'dq')
        dp = _node_array(self.dp, self.grid, 'dp')
        if dq.shape != dp.shape:
            raise DimensionError(f"dq {dq.shape} and dp {dp.shape} differ", expected=dq.shape, actual=dp.shape)
        object.__setattr__(self, 'dq', dq)
        object.__setattr__(self, 'dp', dp)

    @property
    def n(self) -> int:
        return self.dq.shape[1]

    @classmethod
    def zero(cls, grid: Grid, n: int) -> 'TangentVector':
        return cls(grid, np.zeros((grid.size, n)), np.zeros((grid.size, n)))

    def is_admissible(self, bound: float = SEMI_FREE_ENDPOINT_TOL) -> bool:
        """Semi-free tangents need dp and dq' to vanish at both ends; loops always pass."""
        if self.grid.is_periodic:
            return True
        scale = max(1.0, float(np.max(np.abs(self.dq))), float(np.max(np.abs(self.dp))))
        worst = max(float(np.max(np.abs(np.concatenate([self.dp[0], self.dp[-1]])))), end_slope(self.dq, self.grid))
        return bool(worst <= bound * scale)

    def with_dq(self, dq) -> 'TangentVector':
        return TangentVector(self.grid, dq, self.dp)
