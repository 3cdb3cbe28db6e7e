"""
Local functionals of first-order jets for the Poisson path-space lab.
Evaluation, variational gradients with boundary covectors, and the finite-difference oracle.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple
import sys
import os

import numpy as np
from numpy.polynomial import polynomial as npoly

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    RICHARDSON_STEPS,
    SLOT_CHECK_SAMPLES,
    SLOT_CHECK_SEED,
    SLOT_CHECK_STEP,
    SLOT_CHECK_TOL,
)
from pathspace.grid import Grid, differentiate, integrate
from pathspace.paths import PathSample, TangentVector
from utils.logger import DimensionError, log_error, log_warning


SLOTS = ('q', 'dq', 'p', 'dp')


class Jet(NamedTuple):
    """First-order jet sampled at m points: t has shape (m,), the others (m, n)."""
    t: np.ndarray
    q: np.ndarray
    dq: np.ndarray
    p: np.ndarray
    dp: np.ndarray

    def replace_slot(self, slot: str, values: np.ndarray) -> 'Jet':
        return self._replace(**{slot: values})


Integrand = Callable[[Jet], np.ndarray]


def jet_of(a: PathSample) -> Jet:
    return Jet(a.t, a.q, a.q_prime(), a.p, a.p_prime())


@dataclass(frozen=True, eq=False)
class GradientResult:
    """Sampled (A, B) with the boundary covectors alpha0 = df/dq' at t=0 and alpha1 at t=1."""
    A: np.ndarray
    B: np.ndarray
    alpha0: np.ndarray
    alpha1: np.ndarray

    def __add__(self, other: 'GradientResult') -> 'GradientResult':
        return GradientResult(self.A + other.A, self.B + other.B,
                              self.alpha0 + other.alpha0, self.alpha1 + other.alpha1)

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.A)), np.max(np.abs(self.B))))


class LocalFunctional:
    """
    F(a) = int f(t, q, q', p, p') dt with analytic slot gradients.

    Integrand and slot gradients are vectorised over jet points: the integrand
    returns shape (m,), each slot gradient shape (m, n). The slot gradients are
    compared once with central finite differences at seeded random jets.
    """

    def __init__(self, n: int, integrand: Integrand, slot_gradients: Sequence[Integrand],
                 label: str = 'F', check: bool = True):
        if len(slot_gradients) != len(SLOTS):
            raise DimensionError(f"Expected {len(SLOTS)} slot gradients, got {len(slot_gradients)}",
                                 expected=len(SLOTS), actual=len(slot_gradients))
        self._n = int(n)
        self._integrand = integrand
        self._slots: Tuple[Integrand, ...] = tuple(slot_gradients)
        self.label = label
        if check:
            self.check_slot_gradients()

    @property
    def n(self) -> int:
        return self._n

    def integrand(self, jet: Jet) -> np.ndarray:
        return np.asarray(self._integrand(jet), dtype=float)

    def slot_gradient(self, slot: str, jet: Jet) -> np.ndarray:
        values = np.asarray(self._slots[SLOTS.index(slot)](jet), dtype=float)
        return np.broadcast_to(values, jet.q.shape)

    def check_slot_gradients(self, samples: int = SLOT_CHECK_SAMPLES, step: float = SLOT_CHECK_STEP,
                             tol: float = SLOT_CHECK_TOL) -> float:
        """
        Compare every slot gradient with central differences of the integrand.

        Returns:
            Worst relative error found

        Raises:
            ValueError: When any slot exceeds tol
        """
        rng = np.random.default_rng(SLOT_CHECK_SEED)
        shape = (samples, self._n)
        jet = Jet(rng.uniform(0.0, 1.0, samples), *(rng.uniform(-1.0, 1.0, shape) for _ in SLOTS))
        worst = 0.0

        for slot in SLOTS:
            analytic = self.slot_gradient(slot, jet)
            base = getattr(jet, slot)
            numeric = np.zeros(shape)
            for k in range(self._n):
                bump = np.zeros(shape)
                bump[:, k] = step
                plus = self.integrand(jet.replace_slot(slot, base + bump))
                minus = self.integrand(jet.replace_slot(slot, base - bump))
                numeric[:, k] = (plus - minus) / (2.0 * step)
            error = np.max(np.abs(analytic - numeric)) / max(1.0, float(np.max(np.abs(numeric))))
            worst = max(worst, float(error))

        if worst > tol:
            error = ValueError(f"Slot gradients of {self.label} disagree with finite differences ({worst:.2e})")
            log_error(error, {'operation': 'check_slot_gradients', 'functional': self.label})
            raise error
        return worst

    def __add__(self, other: 'LocalFunctional') -> 'LocalFunctional':
        if other.n != self.n:
            raise DimensionError("Cannot add functionals on different dimensions", expected=self.n, actual=other.n)
        return LocalFunctional(
            self.n,
            lambda jet: self.integrand(jet) + other.integrand(jet),
            [self._sum_slot(other, slot) for slot in SLOTS],
            label=f"({self.label} + {other.label})",
            check=False,
        )

    def _sum_slot(self, other: 'LocalFunctional', slot: str) -> Integrand:
        return lambda jet: self.slot_gradient(slot, jet) + other.slot_gradient(slot, jet)

    def scaled(self, factor: float) -> 'LocalFunctional':
        return LocalFunctional(
            self.n,
            lambda jet: factor * self.integrand(jet),
            [self._scaled_slot(factor, slot) for slot in SLOTS],
            label=f"{factor:g}*{self.label}",
            check=False,
        )

    def _scaled_slot(self, factor: float, slot: str) -> Integrand:
        return lambda jet: factor * self.slot_gradient(slot, jet)

    def __repr__(self) -> str:
        return f"LocalFunctional({self.label!r}, n={self.n})"


def _check_dimension(F: LocalFunctional, a: PathSample) -> None:
    if F.n != a.n:
        raise DimensionError(f"{F.label} acts on R^{F.n}, path lives in R^{a.n}", expected=F.n, actual=a.n)


def evaluate(F: LocalFunctional, a: PathSample) -> float:
    _check_dimension(F, a)
    return integrate(F.integrand(jet_of(a)), a.grid)


def gradient(F: LocalFunctional, a: PathSample) -> GradientResult:
    """
    A = df/dq - d/dt df/dq', B = df/dp - d/dt df/dp'.

    The time derivatives are taken with the grid differentiation of the
    sampled slot gradients. Boundary covectors are df/dq' at the end jets on
    SemiFree grids and zero on loops.
    """
    _check_dimension(F, a)
    jet = jet_of(a)
    grid = a.grid
    d_dq = F.slot_gradient('dq', jet)
    A = F.slot_gradient('q', jet) - differentiate(d_dq, grid)
    B = F.slot_gradient('p', jet) - differentiate(F.slot_gradient('dp', jet), grid)
    if grid.is_periodic:
        zero = np.zeros(a.n)
        return GradientResult(A, B, zero, zero.copy())
    return GradientResult(A, B, d_dq[0].copy(), d_dq[-1].copy())


def gradient_pairing(grad: GradientResult, d: TangentVector, grid: Optional[Grid] = None) -> float:
    """int <A, dq> + int <B, dp> + <alpha1, dq(1)> - <alpha0, dq(0)>."""
    grid = grid or d.grid
    if grad.A.shape != d.dq.shape:
        raise DimensionError("Gradient and tangent shapes differ", expected=grad.A.shape, actual=d.dq.shape)
    value = integrate(np.sum(grad.A * d.dq, axis=1) + np.sum(grad.B * d.dp, axis=1), grid)
    if not grid.is_periodic:
        value += float(grad.alpha1 @ d.dq[-1] - grad.alpha0 @ d.dq[0])
    return value


def directional_derivative(F: LocalFunctional, a: PathSample, d: TangentVector,
                           steps: Sequence[float] = RICHARDSON_STEPS) -> float:
    """
    d/de F(a + e d) at e = 0 by central differences extrapolated to e = 0.

    The central quotients are even in e, so they are fitted by a polynomial in
    e^2 through all steps and the constant term is returned.
    """
    _check_dimension(F, a)
    if d.grid != a.grid or d.n != a.n:
        raise DimensionError("Tangent vector lives on a different grid or dimension")
    if not d.is_admissible():
        log_warning("Tangent vector is not admissible for its grid", {'functional': F.label})

    steps = np.asarray(steps, dtype=float)
    quotients = []
    for eps in steps:
        plus = PathSample(a.grid, a.q + eps * d.dq, a.p + eps * d.dp, validate=False)
        minus = PathSample(a.grid, a.q - eps * d.dq, a.p - eps * d.dp, validate=False)
        quotients.append((evaluate(F, plus) - evaluate(F, minus)) / (2.0 * eps))

    if steps.size == 1:
        return float(quotients[0])
    return float(npoly.polyfit(steps ** 2, quotients, steps.size - 1)[0])


def relative_gap(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))
