"""
Bivector fields for the Poisson path-space lab.
Skew matrices of polynomials with the anchor map, its derivative, the Jacobiator and the Poisson test.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.polynomial import Polynomial
from config import DEFAULT_POISSON_TOL
from utils.logger import BoundaryError, DimensionError


def _as_vector(x, n: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionError(f"{name} has shape {x.shape}, expected ({n},)", expected=n, actual=x.shape)
    return x


class BivectorField:
    """
    Bivector pi on an open subset of R^n.

    Only the entries pi_ij with i < j (1-based) are stored; pi_ji = -pi_ij and
    pi_ii = 0 are implied. Omitted pairs are zero.
    """

    def __init__(self, n: int, upper: Optional[Dict[Tuple[int, int], Polynomial]] = None):
        n = int(n)
        if n < 1:
            raise DimensionError("Bivector dimension must be positive", expected='>= 1', actual=n)
        self._n = n
        self._upper: Dict[Tuple[int, int], Polynomial] = {}
        for (i, j), poly in sorted((upper or {}).items()):
            if not (1 <= i < j <= n):
                raise DimensionError(f"Entry ({i}, {j}) is not an upper pair in 1..{n}", actual=(i, j))
            if poly.nvars != n:
                raise DimensionError(
                    f"Entry ({i}, {j}) has {poly.nvars} variables, expected {n}",
                    expected=n, actual=poly.nvars
                )
            if not poly.is_zero():
                self._upper[(i, j)] = poly

        # d pi_ij / d q_k for every stored entry, keyed (k, i, j) 0-based
        self._partials: Dict[Tuple[int, int, int], Polynomial] = {}
        for (i, j), poly in self._upper.items():
            for k in range(n):
                dpoly = poly.partial(k + 1)
                if not dpoly.is_zero():
                    self._partials[(k, i - 1, j - 1)] = dpoly

    @classmethod
    def zero(cls, n: int) -> 'BivectorField':
        return cls(n, {})

    @property
    def n(self) -> int:
        return self._n

    @property
    def upper(self) -> Dict[Tuple[int, int], Polynomial]:
        return dict(self._upper)

    def entry(self, i: int, j: int) -> Polynomial:
        """pi_ij as a polynomial (1-based, skew-completed)."""
        if not (1 <= i <= self._n and 1 <= j <= self._n):
            raise DimensionError(f"Entry ({i}, {j}) out of range 1..{self._n}", actual=(i, j))
        if i == j:
            return Polynomial.zero(self._n)
        if i < j:
            return self._upper.get((i, j), Polynomial.zero(self._n))
        return -self._upper.get((j, i), Polynomial.zero(self._n))

    def is_constant(self) -> bool:
        return not self._partials

    # -------------------------------------------------------------------------
    # Pointwise evaluation
    # -------------------------------------------------------------------------
    def matrices(self, points) -> np.ndarray:
        """pi(q) for each row of an (m, n) array, shape (m, n, n)."""
        points = self._check_points(points)
        out = np.zeros((points.shape[0], self._n, self._n))
        for (i, j), poly in self._upper.items():
            values = poly.evaluate_many(points)
            out[:, i - 1, j - 1] = values
            out[:, j - 1, i - 1] = -values
        return out

    def matrix(self, q) -> np.ndarray:
        q = _as_vector(q, self._n, 'q')
        return self.matrices(q[None, :])[0]

    def derivative_tensors(self, points) -> np.ndarray:
        """d pi_ij / d q_k at each row, shape (m, n, n, n) indexed [m, k, i, j]."""
        points = self._check_points(points)
        out = np.zeros((points.shape[0], self._n, self._n, self._n))
        for (k, i, j), dpoly in self._partials.items():
            values = dpoly.evaluate_many(points)
            out[:, k, i, j] = values
            out[:, k, j, i] = -values
        return out

    def derivative_tensor(self, q) -> np.ndarray:
        q = _as_vector(q, self._n, 'q')
        return self.derivative_tensors(q[None, :])[0]

    def _check_points(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self._n:
            raise DimensionError(
                f"Points of shape {points.shape} for a bivector on R^{self._n}",
                expected=('m', self._n), actual=points.shape
            )
        return points

    def __repr__(self) -> str:
        entries = ", ".join(f"pi{i}{j}={poly!r}" for (i, j), poly in self._upper.items())
        return f"BivectorField(n={self._n}, {entries or '0'})"


@dataclass(frozen=True, eq=False)
class Jacobiator3Tensor:
    """J_rsj evaluated at a point; entries are 0-based [r, s, j]."""
    n: int
    entries: np.ndarray

    def component(self, r: int, s: int, j: int) -> float:
        """Entry J_rsj with 1-based indices."""
        return float(self.entries[r - 1, s - 1, j - 1])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def antisymmetry_defect(self) -> float:
        """Largest |J + J o swap| over the three transpositions."""
        e = self.entries
        if e.size == 0:
            return 0.0
        swaps = (e + e.transpose(1, 0, 2), e + e.transpose(0, 2, 1), e + e.transpose(2, 1, 0))
        return float(max(np.max(np.abs(s)) for s in swaps))

    def contract(self, alpha1, alpha2, p) -> float:
        return float(np.einsum('rsj,r,s,j->', self.entries, alpha1, alpha2, p))


@dataclass
class PoissonCheck:
    """Result of the sampled Jacobiator test."""
    poisson: bool
    max_abs_J: float
    witness: Optional[np.ndarray]
    samples: int
    tol: float

    def to_dict(self) -> Dict:
        return {
            'poisson': self.poisson,
            'max_abs_J': self.max_abs_J,
            'witness': None if self.witness is None else [float(x) for x in self.witness],
            'samples': self.samples,
            'tol': self.tol,
        }


# =============================================================================
# Anchor map and derivatives
# =============================================================================

def sharp(pi: BivectorField, q, p) -> np.ndarray:
    """
    Anchor map pi#_q(p).

    Args:
        pi: Bivector field on R^n
        q: Base point
        p: Covector at q

    Returns:
        Vector with components sum_j pi_sj(q) p_j
    """
    q = _as_vector(q, pi.n, 'q')
    p = _as_vector(p, pi.n, 'p')
    return pi.matrix(q) @ p


def sharp_many(pi: BivectorField, qs, ps) -> np.ndarray:
    """Node-wise anchor map for (m, n) arrays of points and covectors."""
    ps = np.asarray(ps, dtype=float)
    mats = pi.matrices(qs)
    if ps.shape != mats.shape[:2]:
        raise DimensionError(f"Covectors of shape {ps.shape}, expected {mats.shape[:2]}",
                             expected=mats.shape[:2], actual=ps.shape)
    return np.einsum('mij,mj->mi', mats, ps)


def sharp_derivative(pi: BivectorField, q, u, p) -> np.ndarray:
    """Derivative of q -> pi#_q(p) in the direction u: sum_k u_k (d pi/d q_k)(q) p."""
    q = _as_vector(q, pi.n, 'q')
    u = _as_vector(u, pi.n, 'u')
    p = _as_vector(p, pi.n, 'p')
    return np.einsum('k,kij,j->i', u, pi.derivative_tensor(q), p)


def jacobiator(pi: BivectorField, q) -> Jacobiator3Tensor:
    """
    Jacobiator J_rsj(q) = sum_k (d_k pi_rs pi_kj + d_k pi_sj pi_kr + d_k pi_jr pi_ks).

    Vanishes identically exactly when pi is Poisson.
    """
    q = _as_vector(q, pi.n, 'q')
    mat = pi.matrix(q)
    dmat = pi.derivative_tensor(q)
    entries = (
        np.einsum('krs,kj->rsj', dmat, mat)
        + np.einsum('ksj,kr->rsj', dmat, mat)
        + np.einsum('kjr,ks->rsj', dmat, mat)
    )
    return Jacobiator3Tensor(n=pi.n, entries=entries)


def jacobiator_many(pi: BivectorField, points) -> np.ndarray:
    """J at each row of an (m, n) array, shape (m, n, n, n)."""
    mats = pi.matrices(points)
    dmats = pi.derivative_tensors(points)
    return (
        np.einsum('mkrs,mkj->mrsj', dmats, mats)
        + np.einsum('mksj,mkr->mrsj', dmats, mats)
        + np.einsum('mkjr,mks->mrsj', dmats, mats)
    )


def dpi_star(pi: BivectorField, q, alpha, beta) -> np.ndarray:
    """Covector X with <X, u> = -<(d pi#/d q)(u)(beta), alpha> for every u."""
    q = _as_vector(q, pi.n, 'q')
    alpha = _as_vector(alpha, pi.n, 'alpha')
    beta = _as_vector(beta, pi.n, 'beta')
    return -np.einsum('i,kij,j->k', alpha, pi.derivative_tensor(q), beta)


def jacobi_pairing(pi: BivectorField, q, alpha1, alpha2, p) -> float:
    """
    <D(pi# p)(alpha2) - D(pi# alpha2)(p), alpha1> + <D(pi# alpha1)(p), alpha2>,
    with D(u) the derivative of pi# in the direction u.

    Equals the contraction of J with (alpha1, alpha2, p) for every bivector.
    """
    q = _as_vector(q, pi.n, 'q')
    alpha1 = _as_vector(alpha1, pi.n, 'alpha1')
    alpha2 = _as_vector(alpha2, pi.n, 'alpha2')
    p = _as_vector(p, pi.n, 'p')

    def d_sharp(u, cov):
        return sharp_derivative(pi, q, u, cov)

    first = d_sharp(sharp(pi, q, p), alpha2) - d_sharp(sharp(pi, q, alpha2), p)
    second = d_sharp(sharp(pi, q, alpha1), p)
    return float(first @ alpha1 + second @ alpha2)


# =============================================================================
# Poisson test
# =============================================================================

def is_poisson(pi: BivectorField, sample_points: Sequence, tol: float = DEFAULT_POISSON_TOL) -> PoissonCheck:
    """
    Sampled Poisson test.

    Args:
        pi: Bivector field
        sample_points: Non-empty list of points in R^n
        tol: Threshold on max |J_rsj|

    Returns:
        PoissonCheck with the verdict, max |J| and a maximizing point when not Poisson
    """
    points = np.asarray(sample_points, dtype=float)
    if points.size == 0:
        raise BoundaryError("is_poisson needs at least one sample point", where='sample_points')
    if points.ndim == 1:
        points = points[None, :]

    values = np.abs(jacobiator_many(pi, points)).reshape(points.shape[0], -1)
    per_point = values.max(axis=1) if values.shape[1] else np.zeros(points.shape[0])
    worst = int(np.argmax(per_point))
    max_abs = float(per_point[worst])
    poisson = max_abs <= tol

    return PoissonCheck(
        poisson=poisson,
        max_abs_J=max_abs,
        witness=None if poisson else points[worst].copy(),
        samples=int(points.shape[0]),
        tol=float(tol),
    )


def coefficient_sup(pi: BivectorField, points) -> float:
    """max |pi_ij(q)| over the given points."""
    points = np.asarray(points, dtype=float)
    if points.size == 0 or not pi.upper:
        return 0.0
    return float(np.max(np.abs(pi.matrices(points))))


# =============================================================================
# Biderivation oracle
# =============================================================================

def poisson_bracket(pi: BivectorField, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = sum_ij pi_ij d_i f d_j g as a polynomial."""
    if f.nvars != pi.n or g.nvars != pi.n:
        raise DimensionError("Functions and bivector live on different spaces",
                             expected=pi.n, actual=(f.nvars, g.nvars))
    result = Polynomial.zero(pi.n)
    for (i, j), poly in pi.upper.items():
        result = result + poly * (f.partial(i) * g.partial(j) - f.partial(j) * g.partial(i))
    return result


def jacobi_oracle(pi: BivectorField, r: int, s: int, j: int) -> Polynomial:
    """{{q_r, q_s}, q_j} + {{q_j, q_r}, q_s} + {{q_s, q_j}, q_r} on coordinate functions."""
    coords = [Polynomial.variable(pi.n, k) for k in (r, s, j)]
    qr, qs, qj = coords

    def bracket(f, g):
        return poisson_bracket(pi, f, g)

    return bracket(bracket(qr, qs), qj) + bracket(bracket(qj, qr), qs) + bracket(bracket(qs, qj), qr)


def is_casimir_function(pi: BivectorField, h: Polynomial, points, tol: float = DEFAULT_POISSON_TOL) -> Tuple[bool, float]:
    """Check pi#(dh) = 0 on the sample points; returns (verdict, max norm)."""
    if h.nvars != pi.n:
        raise DimensionError("Function and bivector live on different spaces", expected=pi.n, actual=h.nvars)
    points = np.asarray(points, dtype=float)
    grads = np.stack([dh.evaluate_many(points) for dh in h.gradient()], axis=1)
    worst = float(np.max(np.abs(sharp_many(pi, points, grads)))) if points.size else 0.0
    return worst <= tol, worst
