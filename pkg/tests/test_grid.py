import numpy as np
import pytest

from pathspace.bumps import flat_bump, flat_step, flat_step_on, plateau, unit_bump, unit_bump_on
from pathspace.grid import Grid, GridKind, differentiate, integrate
from utils.logger import BoundaryError, DimensionError


class TestGrid:
    def test_semi_free_nodes(self):
        grid = Grid.semi_free(8)
        assert grid.size == 9
        assert grid.nodes[0] == 0.0 and grid.nodes[-1] == 1.0

    def test_periodic_nodes(self):
        grid = Grid.periodic(8)
        assert grid.size == 8
        assert grid.nodes[-1] == pytest.approx(7 / 8)

    def test_kind_from_string(self):
        assert Grid(16, 'periodic').kind is GridKind.PERIODIC

    def test_midpoint_is_a_node(self):
        grid = Grid.semi_free(64)
        assert grid.nodes[grid.mid_index] == 0.5

    @pytest.mark.parametrize('N, flat', [(8, 2), (12, 3), (16, 4), (256, 4)])
    def test_flat_nodes(self, N, flat):
        grid = Grid.semi_free(N)
        assert grid.flat_nodes == flat
        assert grid.flat_margin == pytest.approx(flat / N)
        assert Grid.periodic(N).flat_nodes == 0

    @pytest.mark.parametrize('n', [7, 6, 0])
    def test_rejects_odd_or_small(self, n):
        with pytest.raises(BoundaryError):
            Grid(n)


class TestDifferentiate:
    def test_periodic_sine(self):
        grid = Grid.periodic(64)
        t = grid.nodes
        error = differentiate(np.sin(2 * np.pi * t), grid) - 2 * np.pi * np.cos(2 * np.pi * t)
        assert np.max(np.abs(error)) <= 1e-9

    @pytest.mark.parametrize('kind', ['semifree', 'periodic'])
    def test_constant(self, kind):
        grid = Grid(32, kind)
        assert np.max(np.abs(differentiate(np.full(grid.size, 3.0), grid))) <= 1e-10

    def test_semi_free_quartic(self):
        grid = Grid.semi_free(64)
        t = grid.nodes
        exact = 2 * t * (1 - t) ** 2 - 2 * t ** 2 * (1 - t)
        assert np.max(np.abs(differentiate(t ** 2 * (1 - t) ** 2, grid) - exact)) <= 1e-8

    def test_columns_independently(self):
        grid = Grid.semi_free(32)
        t = grid.nodes
        values = np.column_stack([t, t ** 2])
        assert np.allclose(differentiate(values, grid), np.column_stack([np.ones_like(t), 2 * t]), atol=1e-10)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            differentiate(np.zeros(10), Grid.semi_free(16))


class TestIntegrate:
    def test_periodic_sine_squared(self):
        grid = Grid.periodic(64)
        assert integrate(np.sin(2 * np.pi * grid.nodes) ** 2, grid) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize('kind', ['semifree', 'periodic'])
    def test_constant_one(self, kind):
        grid = Grid(16, kind)
        assert integrate(np.ones(grid.size), grid) == pytest.approx(1.0, abs=1e-14)

    def test_semi_free_square(self):
        grid = Grid.semi_free(64)
        assert integrate(grid.nodes ** 2, grid) == pytest.approx(1 / 3, abs=1e-10)

    def test_periodic_derivative_integrates_to_zero(self):
        grid = Grid.periodic(128)
        t = grid.nodes
        u = np.exp(np.sin(2 * np.pi * t))
        assert abs(integrate(differentiate(u, grid), grid)) <= 1e-10

    def test_periodic_integration_by_parts(self):
        grid = Grid.periodic(128)
        t = grid.nodes
        u, v = np.cos(2 * np.pi * t) + 0.3 * np.sin(6 * np.pi * t), np.exp(np.cos(2 * np.pi * t))
        total = integrate(differentiate(u, grid) * v + u * differentiate(v, grid), grid)
        assert abs(total) <= 1e-8

    def test_semi_free_integration_by_parts(self):
        grid = Grid.semi_free(128)
        t = grid.nodes
        u, v = np.sin(np.pi * t) + t ** 2, np.cos(t)
        total = integrate(differentiate(u, grid) * v + u * differentiate(v, grid), grid)
        assert total == pytest.approx(u[-1] * v[-1] - u[0] * v[0], abs=1e-6)


class TestBumps:
    def test_flat_bump_support(self):
        assert np.array_equal(flat_bump([-0.5, 0.0, 1.0, 1.5]), np.zeros(4))

    def test_unit_bump_peak(self):
        assert unit_bump(0.5) == 1.0

    def test_flat_step_ends(self):
        values = flat_step([0.0, 0.5, 1.0])
        assert values == pytest.approx([0.0, 0.5, 1.0], abs=1e-12)

    @pytest.mark.parametrize('N', [8, 16, 64])
    def test_squeezed_profiles_hold_end_values(self, N):
        grid = Grid.semi_free(N)
        m = grid.flat_nodes
        step, bump = flat_step_on(grid), unit_bump_on(grid)
        assert np.array_equal(step[:m + 1], np.zeros(m + 1)) and np.array_equal(step[-m - 1:], np.ones(m + 1))
        assert not np.any(bump[:m + 1]) and not np.any(bump[-m - 1:])
        assert bump[grid.mid_index] == pytest.approx(1.0)

    def test_plateau(self):
        values = plateau(np.array([0.1, 0.3, 0.5, 0.9]), (0.375, 0.625), (0.25, 0.75))
        assert values[0] == 0.0 and values[-1] == 0.0
        assert values[2] == 1.0
        assert 0.0 < values[1] < 1.0
