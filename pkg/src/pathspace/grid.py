"""
Uniform grids on [0, 1] for the Poisson path-space lab.
Differentiation and quadrature for semi-free paths and loops.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union
import sys
import os

import numpy as np
from scipy import sparse
from scipy.fft import fft, ifft, fftfreq
from scipy.integrate import simpson

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import DEFAULT_GRID_N, ENDPOINT_STENCIL_NODES, MIN_GRID_N
from utils.logger import BoundaryError, DimensionError


class GridKind(Enum):
    SEMI_FREE = 'semifree'
    PERIODIC = 'periodic'


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid with N intervals.

    SemiFree nodes are i/N for i = 0..N; Periodic nodes are i/N for i = 0..N-1
    with t = 1 identified with t = 0.
    """
    N: int = DEFAULT_GRID_N
    kind: GridKind = GridKind.SEMI_FREE

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, 'kind', GridKind(self.kind))
        if int(self.N) != self.N or self.N < MIN_GRID_N or self.N % 2:
            raise BoundaryError(f"Grid needs an even N >= {MIN_GRID_N}, got {self.N}", where='N')
        object.__setattr__(self, 'N', int(self.N))

    @classmethod
    def semi_free(cls, N: int = DEFAULT_GRID_N) -> 'Grid':
        return cls(N, GridKind.SEMI_FREE)

    @classmethod
    def periodic(cls, N: int = DEFAULT_GRID_N) -> 'Grid':
        return cls(N, GridKind.PERIODIC)

    @property
    def is_periodic(self) -> bool:
        return self.kind is GridKind.PERIODIC

    @property
    def size(self) -> int:
        return self.N if self.is_periodic else self.N + 1

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.size) / self.N

    @property
    def mid_index(self) -> int:
        """Index of the node t = 1/2 (exact since N is even)."""
        return self.N // 2

    @property
    def flat_nodes(self) -> int:
        """Nodes next to each end on which semi-free data must equal its end value."""
        if self.is_periodic:
            return 0
        return min(ENDPOINT_STENCIL_NODES, self.N // 4)

    @property
    def flat_margin(self) -> float:
        return self.flat_nodes / self.N


@lru_cache(maxsize=32)
def differentiation_matrix(grid: Grid) -> np.ndarray:
    """
    Dense first-derivative matrix on the grid.

    Periodic grids use the Fourier differentiation matrix with the Nyquist mode
    dropped. SemiFree grids use 4th-order central differences inside and
    one-sided 4th-order stencils on the two nodes next to each end.
    """
    n, h = grid.size, grid.h

    if grid.is_periodic:
        k = fftfreq(n, d=1.0 / n)
        k[n // 2] = 0.0
        mat = ifft(2j * np.pi * k[:, None] * fft(np.eye(n), axis=0), axis=0).real
    else:
        mat = sparse.diags(
            [1.0, -8.0, 8.0, -1.0], [-2, -1, 1, 2], shape=(n, n)
        ).toarray()
        mat[0, :5] = [-25.0, 48.0, -36.0, 16.0, -3.0]
        mat[1, :5] = [-3.0, -10.0, 18.0, -6.0, 1.0]
        mat[-2, :] = 0.0
        mat[-1, :] = 0.0
        mat[-2, -5:] = [-1.0, 6.0, -18.0, 10.0, 3.0]
        mat[-1, -5:] = [3.0, -16.0, 36.0, -48.0, 25.0]
        mat /= 12.0 * h

    mat.setflags(write=False)
    return mat


def _check_length(values: np.ndarray, grid: Grid) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 0 or values.shape[0] != grid.size:
        raise DimensionError(
            f"Expected {grid.size} node values, got shape {values.shape}",
            expected=grid.size, actual=values.shape
        )
    return values


def differentiate(values, grid: Grid) -> np.ndarray:
    """
    Differentiate per-node values along the first axis.

    Args:
        values: Array of shape (grid.size,) or (grid.size, ...)
        grid: The grid the values live on

    Returns:
        Array of the same shape holding the sampled derivative
    """
    values = _check_length(values, grid)
    return np.tensordot(differentiation_matrix(grid), values, axes=(1, 0))


def integrate(values, grid: Grid) -> Union[float, np.ndarray]:
    """Rectangle rule on loops, composite Simpson on semi-free grids."""
    values = _check_length(values, grid)
    if grid.is_periodic:
        result = grid.h * np.sum(values, axis=0)
    else:
        result = simpson(values, dx=grid.h, axis=0)
    if np.ndim(result) == 0:
        return float(result)
    return np.asarray(result)
