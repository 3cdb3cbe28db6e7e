"""
Named families of local functionals for the Poisson path-space lab.
Constraint functionals F_{f,s}, Casimir functionals, total derivatives and polynomial jet integrands.
"""

from typing import Callable, Dict, Iterable, Tuple, Union
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import PROFILE_BOUNDARY_TOL
from algebra.polynomial import Polynomial
from functionals.local import Jet, LocalFunctional, SLOTS, evaluate
from geometry.bivector import BivectorField
from pathspace.grid import Grid
from pathspace.paths import PathSample
from utils.logger import BoundaryError, DimensionError


Profile = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]

# Offsets of each jet slot in the variable list (t, q, q', p, p')
_SLOT_OFFSET = {'t': 0, 'q': 1, 'dq': 2, 'p': 3, 'dp': 4}


def jet_variable(n: int, slot: str, index: int) -> Polynomial:
    """
    Coordinate of the jet space as a Polynomial in 4n + 1 variables.

    Args:
        n: Base dimension
        slot: One of 't', 'q', 'dq', 'p', 'dp'
        index: 1-based component (ignored for 't')
    """
    if slot not in _SLOT_OFFSET:
        raise ValueError(f"Unknown jet slot: {slot}")
    if slot == 't':
        return Polynomial.variable(4 * n + 1, 1)
    if not 1 <= index <= n:
        raise DimensionError(f"Component {index} out of range 1..{n}", expected=n, actual=index)
    return Polynomial.variable(4 * n + 1, 1 + (_SLOT_OFFSET[slot] - 1) * n + index)


def _stack(jet: Jet) -> np.ndarray:
    return np.column_stack([jet.t, jet.q, jet.dq, jet.p, jet.dp])


def jet_polynomial_functional(n: int, integrand: Polynomial, label: str = 'F_poly') -> LocalFunctional:
    """Local functional whose integrand is a Polynomial in (t, q, q', p, p'); slot gradients are exact partials."""
    if integrand.nvars != 4 * n + 1:
        raise DimensionError(f"Jet polynomial needs {4 * n + 1} variables, got {integrand.nvars}",
                             expected=4 * n + 1, actual=integrand.nvars)
    partials = {
        slot: [integrand.partial(1 + (_SLOT_OFFSET[slot] - 1) * n + k) for k in range(1, n + 1)]
        for slot in SLOTS
    }

    def slot_gradient(slot: str):
        return lambda jet: np.column_stack([d.evaluate_many(_stack(jet)) for d in partials[slot]])

    return LocalFunctional(
        n,
        lambda jet: integrand.evaluate_many(_stack(jet)),
        [slot_gradient(slot) for slot in SLOTS],
        label=label,
    )


# =============================================================================
# Constraint functionals
# =============================================================================

def profile_function(profile: Profile, grid: Grid) -> Callable[[np.ndarray], np.ndarray]:
    """
    Turn a sampled profile into a function of t, exact on the grid nodes.

    SemiFree profiles must vanish at t = 0 and t = 1.
    """
    if callable(profile):
        values = np.asarray(profile(grid.nodes), dtype=float)
        func = profile
    else:
        values = np.asarray(profile, dtype=float)
        if values.shape != (grid.size,):
            raise DimensionError(f"Profile has shape {values.shape}, expected ({grid.size},)",
                                 expected=grid.size, actual=values.shape)
        nodes = grid.nodes
        if grid.is_periodic:
            func = lambda t: np.interp(t, nodes, values, period=1.0)
        else:
            func = lambda t: np.interp(t, nodes, values)

    if not grid.is_periodic and max(abs(values[0]), abs(values[-1])) > PROFILE_BOUNDARY_TOL:
        raise BoundaryError("Semi-free profile must vanish at t = 0 and t = 1", where='profile')
    return func


def constraint_functional(pi: BivectorField, s: int, profile: Profile, grid: Grid) -> LocalFunctional:
    """
    F_{f,s}(a) = int f(t) (sum_j pi_sj(q) p_j - q_s') dt.

    Args:
        pi: Bivector field
        s: 1-based component
        profile: f sampled on the grid, or a callable of t
        grid: Grid the functional will be evaluated on

    Returns:
        LocalFunctional with slot gradients
        df/dq_k = f sum_j d_k pi_sj p_j, df/dq' = -f e_s, df/dp = f pi_s., df/dp' = 0
    """
    n = pi.n
    if not 1 <= s <= n:
        raise DimensionError(f"Constraint index {s} out of range 1..{n}", expected=n, actual=s)
    f = profile_function(profile, grid)
    row = s - 1

    def integrand(jet: Jet) -> np.ndarray:
        anchor = np.einsum('mj,mj->m', pi.matrices(jet.q)[:, row, :], jet.p)
        return f(jet.t) * (anchor - jet.dq[:, row])

    def by_q(jet: Jet) -> np.ndarray:
        return f(jet.t)[:, None] * np.einsum('mkj,mj->mk', pi.derivative_tensors(jet.q)[:, :, row, :], jet.p)

    def by_dq(jet: Jet) -> np.ndarray:
        out = np.zeros(jet.q.shape)
        out[:, row] = -f(jet.t)
        return out

    def by_p(jet: Jet) -> np.ndarray:
        return f(jet.t)[:, None] * pi.matrices(jet.q)[:, row, :]

    return LocalFunctional(n, integrand, [by_q, by_dq, by_p, lambda jet: 0.0], label=f"F_f,{s}")


def constraint_ideal_defect(pi: BivectorField, a: PathSample, profiles: Iterable[Profile]) -> float:
    """max |F_{f,s}(a)| over s = 1..n and the given profiles."""
    worst = 0.0
    for profile in profiles:
        for s in range(1, pi.n + 1):
            worst = max(worst, abs(evaluate(constraint_functional(pi, s, profile, a.grid), a)))
    return worst


# =============================================================================
# Casimir and total-derivative functionals
# =============================================================================

def _gradient_and_hessian(h: Polynomial):
    grad = h.gradient()
    hess = [g.gradient() for g in grad]
    return grad, hess


def _eval_list(polys, points: np.ndarray) -> np.ndarray:
    return np.column_stack([p.evaluate_many(points) for p in polys])


def _eval_matrix(rows, points: np.ndarray) -> np.ndarray:
    return np.stack([_eval_list(row, points) for row in rows], axis=1)


def casimir_functional(h: Polynomial) -> LocalFunctional:
    """F(a) = int d_q h(q') dt = h(q(1)) - h(q(0)); A = B = 0 and only the boundary covectors survive."""
    n = h.nvars
    grad, hess = _gradient_and_hessian(h)

    def integrand(jet: Jet) -> np.ndarray:
        return np.einsum('mk,mk->m', _eval_list(grad, jet.q), jet.dq)

    def by_q(jet: Jet) -> np.ndarray:
        return np.einsum('mik,mk->mi', _eval_matrix(hess, jet.q), jet.dq)

    return LocalFunctional(
        n, integrand,
        [by_q, lambda jet: _eval_list(grad, jet.q), lambda jet: 0.0, lambda jet: 0.0],
        label='casimir',
    )


def _embed_in_jet(g: Polynomial, n: int) -> Polynomial:
    # (t, q1..qn) are the first n + 1 jet variables; q', p, p' get exponent 0
    return Polynomial(4 * n + 1, {exp + (0,) * (3 * n): coef for exp, coef in g.terms.items()})


def _vanishes_at_ends(g: Polynomial, tol: float = PROFILE_BOUNDARY_TOL) -> bool:
    """g(0, q) and g(1, q) are the zero polynomial in q, up to tol per coefficient."""
    at_zero: Dict[Tuple[int, ...], float] = {}
    at_one: Dict[Tuple[int, ...], float] = {}
    for exp, coef in g.terms.items():
        rest = exp[1:]
        if exp[0] == 0:
            at_zero[rest] = at_zero.get(rest, 0.0) + coef
        at_one[rest] = at_one.get(rest, 0.0) + coef
    return all(abs(c) <= tol for c in list(at_zero.values()) + list(at_one.values()))


def total_derivative_functional(g: Polynomial, label: str = 'total_derivative') -> LocalFunctional:
    """
    Integrand d/dt g(t, q) = dg/dt + <dg/dq, q'> for a polynomial g in (t, q1..qn).

    g must vanish identically at t = 0 and t = 1, so the functional is zero on
    every semi-free path although its integrand is not.

    Raises:
        DimensionError: If g has fewer than two variables
        BoundaryError: If g(0, .) or g(1, .) is not the zero polynomial
    """
    if g.nvars < 2:
        raise DimensionError("g needs the time variable and at least one q", expected='>= 2', actual=g.nvars)
    if not _vanishes_at_ends(g):
        raise BoundaryError("Total-derivative potential must vanish at t = 0 and t = 1", where='g')
    n = g.nvars - 1
    integrand = _embed_in_jet(g.partial(1), n)
    for k in range(1, n + 1):
        integrand = integrand + _embed_in_jet(g.partial(1 + k), n) * jet_variable(n, 'dq', k)
    return jet_polynomial_functional(n, integrand, label=label)


def random_jet_functional(n: int, rng: np.random.Generator, terms: int = 3, amplitude: float = 1.0) -> LocalFunctional:
    """
    Random quadratic jet integrand: a sum of products of two jet coordinates.

    The time variable enters at most linearly, so products with t stay quadratic in t.
    """
    slots = ['t', 'q', 'dq', 'p', 'dp']
    integrand = Polynomial.zero(4 * n + 1)
    for _ in range(terms):
        first, second = rng.choice(slots, size=2)
        if first == 't' and second == 't':
            second = 'q'
        factor = (jet_variable(n, str(first), int(rng.integers(1, n + 1)))
                  * jet_variable(n, str(second), int(rng.integers(1, n + 1))))
        integrand = integrand + factor.scale(float(rng.uniform(-amplitude, amplitude)))
    return jet_polynomial_functional(n, integrand, label='F_jet')
