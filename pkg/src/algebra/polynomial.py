"""
Multivariate polynomials for the Poisson path-space lab.
Float coefficients on exact monomial structure, so partial derivatives carry no truncation error.
"""

from typing import Dict, Iterable, List, Optional, Tuple, Union
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.logger import DimensionError


Exponent = Tuple[int, ...]
Number = Union[int, float]


class Polynomial:
    """
    Immutable polynomial in `nvars` variables.

    Terms are stored as {exponent tuple: coefficient}. The canonical form drops
    coefficients that are exactly 0.0; near-zero coefficients are kept.

    Example:
        {(2, 1): 1.0} in two variables is q1**2 * q2.
    """

    __slots__ = ('_nvars', '_terms', '_exps', '_coefs')

    def __init__(self, nvars: int, terms: Optional[Dict[Exponent, Number]] = None):
        if int(nvars) < 1:
            raise DimensionError("Polynomial needs at least one variable", expected='>= 1', actual=nvars)
        self._nvars = int(nvars)

        canonical: Dict[Exponent, float] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self._nvars:
                raise DimensionError(
                    f"Exponent {exp} has length {len(exp)}, expected {self._nvars}",
                    expected=self._nvars, actual=len(exp)
                )
            if any(e < 0 for e in exp):
                raise DimensionError(f"Negative exponent in {exp}")
            coef = float(coef)
            if coef != 0.0:
                canonical[exp] = canonical.get(exp, 0.0) + coef
                if canonical[exp] == 0.0:
                    del canonical[exp]

        self._terms = dict(sorted(canonical.items()))
        if self._terms:
            self._exps = np.array(list(self._terms.keys()), dtype=float)
            self._coefs = np.array(list(self._terms.values()), dtype=float)
        else:
            self._exps = np.zeros((0, self._nvars))
            self._coefs = np.zeros(0)

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> 'Polynomial':
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Number) -> 'Polynomial':
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> 'Polynomial':
        """The coordinate function q_index (1-based)."""
        _check_index(index, nvars)
        exp = [0] * nvars
        exp[index - 1] = 1
        return cls(nvars, {tuple(exp): 1.0})

    @classmethod
    def from_pairs(cls, nvars: int, pairs: Iterable[Tuple[Number, Iterable[int]]]) -> 'Polynomial':
        """Build from (coef, exponent) pairs; repeated exponents are summed."""
        terms: Dict[Exponent, float] = {}
        for coef, exp in pairs:
            exp = tuple(int(e) for e in exp)
            terms[exp] = terms.get(exp, 0.0) + float(coef)
        return cls(nvars, terms)

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------
    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Dict[Exponent, float]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(exp) for exp in self._terms)

    def to_pairs(self) -> List[Tuple[float, List[int]]]:
        return [(coef, list(exp)) for exp, coef in self._terms.items()]

    # -------------------------------------------------------------------------
    # Evaluation and differentiation
    # -------------------------------------------------------------------------
    def evaluate(self, point) -> float:
        point = np.asarray(point, dtype=float)
        if point.shape != (self._nvars,):
            raise DimensionError(
                f"Point of shape {point.shape} for polynomial in {self._nvars} variables",
                expected=self._nvars, actual=point.shape
            )
        return float(self.evaluate_many(point[None, :])[0])

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at each row of an (m, nvars) array."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self._nvars:
            raise DimensionError(
                f"Points of shape {points.shape} for polynomial in {self._nvars} variables",
                expected=('m', self._nvars), actual=points.shape
            )
        if not self._terms:
            return np.zeros(points.shape[0])
        monomials = np.prod(points[:, None, :] ** self._exps[None, :, :], axis=2)
        return monomials @ self._coefs

    def partial(self, var: int) -> 'Polynomial':
        """Formal partial derivative with respect to q_var (1-based)."""
        _check_index(var, self._nvars)
        k = var - 1
        terms: Dict[Exponent, float] = {}
        for exp, coef in self._terms.items():
            if exp[k] == 0:
                continue
            lowered = list(exp)
            lowered[k] -= 1
            terms[tuple(lowered)] = coef * exp[k]
        return Polynomial(self._nvars, terms)

    def gradient(self) -> List['Polynomial']:
        return [self.partial(i + 1) for i in range(self._nvars)]

    # -------------------------------------------------------------------------
    # Ring operations
    # -------------------------------------------------------------------------
    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            if other.nvars != self._nvars:
                raise DimensionError(
                    f"Cannot combine polynomials in {self._nvars} and {other.nvars} variables",
                    expected=self._nvars, actual=other.nvars
                )
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Polynomial.constant(self._nvars, float(other))
        return NotImplemented

    def __add__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exp, coef in other._terms.items():
            terms[exp] = terms.get(exp, 0.0) + coef
        return Polynomial(self._nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return self.scale(-1.0)

    def __sub__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> 'Polynomial':
        return (-self) + other

    def __mul__(self, other) -> 'Polynomial':
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, float] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, 0.0) + c1 * c2
        return Polynomial(self._nvars, terms)

    __rmul__ = __mul__

    def scale(self, factor: Number) -> 'Polynomial':
        factor = float(factor)
        return Polynomial(self._nvars, {exp: coef * factor for exp, coef in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._nvars, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial({self._nvars}, 0)"
        parts = []
        for exp, coef in self._terms.items():
            factors = [f"q{i + 1}^{e}" if e > 1 else f"q{i + 1}" for i, e in enumerate(exp) if e]
            parts.append(f"{coef:g}" + ("*" + "*".join(factors) if factors else ""))
        return f"Polynomial({self._nvars}, {' + '.join(parts)})"


def _check_index(index: int, nvars: int) -> None:
    if not 1 <= int(index) <= nvars:
        raise DimensionError(f"Variable index {index} out of range 1..{nvars}", expected=(1, nvars), actual=index)


# =============================================================================
# Functional interface
# =============================================================================

def poly_eval(poly: Polynomial, point) -> float:
    """
    Evaluate a polynomial at a point.

    Args:
        poly: Polynomial in nvars variables
        point: Sequence of length nvars

    Returns:
        Sum over terms of coef * prod(point_i ** exp_i)
    """
    return poly.evaluate(point)


def poly_partial(poly: Polynomial, var: int) -> Polynomial:
    """Exact partial derivative with respect to q_var (1-based)."""
    return poly.partial(var)


def poly_combine(a: Polynomial, b: Optional[Polynomial] = None, op: str = 'add',
                 factor: Optional[float] = None) -> Polynomial:
    """
    Ring operation in canonical form.

    Args:
        a: Left operand
        b: Right operand (unused for 'scale')
        op: 'add', 'mul' or 'scale'
        factor: Scalar for 'scale'

    Returns:
        The combined polynomial; cancelled terms are removed
    """
    if op in ('add', 'mul'):
        if b is None:
            raise ValueError(f"'{op}' needs two operands")
        b = a._coerce(b)
        return a + b if op == 'add' else a * b
    if op == 'scale':
        if factor is None:
            raise ValueError("scale needs a factor")
        return a.scale(factor)
    raise ValueError(f"Unknown polynomial operation: {op}")
