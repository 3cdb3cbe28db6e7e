"""
The canonical bracket of local functionals for the Poisson path-space lab.
Quadrature bracket from variational gradients and the closed form for constraint functionals.
"""

from typing import Tuple
import sys
import os

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import JACOBIATOR_TERM_SIGN
from functionals.families import Profile, profile_function
from functionals.local import LocalFunctional, gradient
from geometry.bivector import BivectorField, jacobiator_many
from pathspace.grid import integrate
from pathspace.maps import cotangent_defect
from pathspace.paths import PathSample
from utils.logger import DimensionError


def lie_bracket(F: LocalFunctional, G: LocalFunctional, a: PathSample) -> float:
    """
    {F, G}(a) = int <A_F, B_G> - <A_G, B_F> dt.

    Args:
        F: First local functional
        G: Second local functional
        a: Path both gradients are sampled on

    Returns:
        The bracket value; swapping F and G negates it exactly
    """
    if F.n != G.n:
        raise DimensionError("Functionals act on different dimensions", expected=F.n, actual=G.n)
    grad_f = gradient(F, a)
    grad_g = gradient(G, a)
    integrand = np.sum(grad_f.A * grad_g.B, axis=1) - np.sum(grad_g.A * grad_f.B, axis=1)
    return integrate(integrand, a.grid)


def constraint_bracket_terms(pi: BivectorField, f_profile: Profile, r: int, g_profile: Profile, s: int,
                             a: PathSample) -> Tuple[float, float]:
    """
    The two terms of {F_{f,r}, G_{g,s}}(a), computed without gradients.

    Returns:
        (int f g sum_k d_k pi_rs (q_k' - (pi# p)_k) dt,  int f g sum_j J_rsj p_j dt)
    """
    n = pi.n
    for index in (r, s):
        if not 1 <= index <= n:
            raise DimensionError(f"Constraint index {index} out of range 1..{n}", expected=n, actual=index)
    if a.n != n:
        raise DimensionError(f"Path in R^{a.n} for a bivector on R^{n}", expected=n, actual=a.n)

    t = a.t
    weight = profile_function(f_profile, a.grid)(t) * profile_function(g_profile, a.grid)(t)
    dmat = pi.derivative_tensors(a.q)[:, :, r - 1, s - 1]
    transport = np.sum(dmat * cotangent_defect(pi, a), axis=1)
    jac = jacobiator_many(pi, a.q)[:, r - 1, s - 1, :]
    obstruction = np.sum(jac * a.p, axis=1)
    return integrate(weight * transport, a.grid), integrate(weight * obstruction, a.grid)


def constraint_bracket_closed_form(pi: BivectorField, f_profile: Profile, r: int, g_profile: Profile, s: int,
                                   a: PathSample) -> float:
    """Closed form of {F_{f,r}, G_{g,s}}(a); the Jacobiator term enters with JACOBIATOR_TERM_SIGN."""
    transport, obstruction = constraint_bracket_terms(pi, f_profile, r, g_profile, s, a)
    return transport + JACOBIATOR_TERM_SIGN * obstruction
