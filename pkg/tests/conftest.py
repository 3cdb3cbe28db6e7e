import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from data.fixtures import fixture_path, load_bivector  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def so3():
    """pi_12 = q3, pi_13 = -q2, pi_23 = q1."""
    return load_bivector(fixture_path('so3'))


@pytest.fixture
def non_poisson():
    """pi_12 = q3, pi_23 = q2, with J_123 = -q3."""
    return load_bivector(fixture_path('non_poisson'))


@pytest.fixture
def x_dx_dy():
    return load_bivector(fixture_path('x_dx_dy'))


@pytest.fixture
def symplectic():
    return load_bivector(fixture_path('symplectic_r2'))


@pytest.fixture
def zero_pi():
    return load_bivector(fixture_path('zero'))
