import numpy as np
import pytest

from cotangent.shooting import shoot_through
from cotangent.tangent import (
    broken_tangent,
    closed_loop_tangent,
    lagrangian_omega_test,
    linearized_residual,
    linearized_tangent,
)
from pathspace.grid import Grid
from pathspace.maps import omega, path_scale
from pathspace.paths import PathSample
from pathspace.sampling import random_covector_series, random_path, random_tangent, symplectic_circle_loop
from utils.logger import BoundaryError, DimensionError, NotCotangentError


def resting_path(grid, n):
    return PathSample(grid, np.zeros((grid.size, n)), np.zeros((grid.size, n)))


class TestLinearizedTangent:
    def test_constant_anchor_integrates_explicitly(self, symplectic):
        grid = Grid.semi_free(64)
        t = grid.nodes
        dq0 = np.array([0.5, -1.0])
        d = linearized_tangent(symplectic, resting_path(grid, 2), np.column_stack([2 * t, 3 * t ** 2]), dq0)
        expected = dq0 + np.column_stack([t ** 3, -t ** 2])
        assert np.allclose(d.dq, expected, atol=1e-12)

    def test_zero_variation_keeps_initial_value(self, symplectic):
        grid = Grid.semi_free(32)
        dq0 = np.array([0.25, 0.75])
        d = linearized_tangent(symplectic, resting_path(grid, 2), np.zeros((grid.size, 2)), dq0)
        assert np.array_equal(d.dq, np.tile(dq0, (grid.size, 1)))

    def test_so3_residual(self, so3, rng):
        grid = Grid.semi_free(256)
        a = shoot_through(so3, [0.3, -0.2, 0.4], [0.1, 0.2, -0.3], grid=grid).path
        dp = random_tangent(grid, 3, rng).dp
        d = linearized_tangent(so3, a, dp, rng.uniform(-1, 1, 3))
        residual = linearized_residual(so3, a, d)
        assert np.max(np.abs(residual)) <= 1e-6 * path_scale(so3, a)

    def test_requires_cotangent_path(self, so3, rng):
        grid = Grid.semi_free(128)
        a = random_path(grid, 3, rng)
        with pytest.raises(NotCotangentError):
            linearized_tangent(so3, a, np.zeros((grid.size, 3)), np.zeros(3))

    def test_shape_mismatch(self, symplectic):
        grid = Grid.semi_free(32)
        with pytest.raises(DimensionError):
            linearized_tangent(symplectic, resting_path(grid, 2), np.zeros((grid.size, 3)), np.zeros(2))


class TestClosedLoopTangent:
    def test_closes_on_circle_loop(self, symplectic, rng):
        grid = Grid.periodic(256)
        a = symplectic_circle_loop(grid)
        dp = random_covector_series(grid, 2, rng) + np.array([0.3, -0.2])
        d, gap = closed_loop_tangent(symplectic, a, dp, np.array([1.0, 0.0]))
        assert gap <= 1e-10
        assert np.allclose(d.dp.mean(axis=0), 0.0, atol=1e-12)
        assert np.max(np.abs(linearized_residual(symplectic, a, d))) <= 1e-6 * path_scale(symplectic, a)


class TestLagrangianOmegaTest:
    def test_circle_loop(self, symplectic):
        grid = Grid.periodic(256)
        a = symplectic_circle_loop(grid)
        result = lagrangian_omega_test(symplectic, a, trials=20, seed=0)
        assert result.kept == 20 and result.non_closing == 0
        assert result.max_abs_omega <= 1e-6 * result.scale
        assert result.broken_omega > 1e-3 * result.scale
        assert result.passes()

    def test_same_tangent_pairs_to_zero(self, symplectic, rng):
        grid = Grid.periodic(128)
        a = symplectic_circle_loop(grid)
        d, _ = closed_loop_tangent(symplectic, a, random_covector_series(grid, 2, rng), np.zeros(2))
        assert omega(d, d) == 0.0

    def test_broken_tangent_leaves_the_cone(self, symplectic, rng):
        grid = Grid.periodic(128)
        a = symplectic_circle_loop(grid)
        d, _ = closed_loop_tangent(symplectic, a, random_covector_series(grid, 2, rng), np.zeros(2))
        residual = linearized_residual(symplectic, a, broken_tangent(d))
        assert np.max(np.abs(residual)) >= 1.0

    def test_deterministic(self, symplectic):
        a = symplectic_circle_loop(Grid.periodic(64))
        first = lagrangian_omega_test(symplectic, a, trials=3, seed=5).to_dict()
        second = lagrangian_omega_test(symplectic, a, trials=3, seed=5).to_dict()
        assert first == second

    def test_needs_a_loop(self, symplectic):
        with pytest.raises(BoundaryError):
            lagrangian_omega_test(symplectic, resting_path(Grid.semi_free(32), 2))

    def test_needs_a_cotangent_loop(self, symplectic):
        grid = Grid.periodic(64)
        a = symplectic_circle_loop(grid, radius=1.0)
        shifted = PathSample(grid, a.q, 2.0 * a.p)
        with pytest.raises(NotCotangentError):
            lagrangian_omega_test(symplectic, shifted, trials=1)
