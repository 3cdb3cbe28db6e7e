import numpy as np
import pytest

from algebra.polynomial import Polynomial
from cotangent.shooting import richardson_rk4, rk4, shoot_through
from geometry.bivector import BivectorField
from pathspace.grid import Grid
from pathspace.maps import bump_reparam, is_cotangent, path_scale
from utils.logger import BoundaryError, DimensionError, ShootingError


class TestRk4:
    def test_exponential(self):
        times = np.linspace(0.0, 1.0, 11)
        states = rk4(lambda t, y: y, [1.0], times, substeps=8)
        assert states[-1, 0] == pytest.approx(np.e, rel=1e-8)

    def test_backward_times(self):
        times = np.linspace(1.0, 0.0, 5)
        states = rk4(lambda t, y: np.array([2.0 * t]), [1.0], times)
        assert states[-1, 0] == pytest.approx(0.0, abs=1e-14)

    def test_blowup(self):
        times = np.linspace(0.0, 1.0, 11)
        with pytest.raises(ShootingError) as excinfo:
            rk4(lambda t, y: y ** 2, [10.0], times)
        assert excinfo.value.t is not None

    def test_richardson_estimate_is_small(self):
        grid = Grid.semi_free(32)
        states, error = richardson_rk4(lambda t, y: np.cos(t) * y, np.array([1.0]), grid)
        assert error <= 1e-10
        assert states[grid.mid_index, 0] == 1.0
        assert states[-1, 0] == pytest.approx(np.exp(np.sin(1.0) - np.sin(0.5)), rel=1e-10)


class TestShootThrough:
    def test_zero_bivector(self, zero_pi):
        grid = Grid.semi_free(64)
        q, p = np.array([0.3, -0.2, 0.1]), np.array([1.0, 2.0, -1.0])
        result = shoot_through(zero_pi, q, p, grid=grid)
        _, rate = bump_reparam(0.25, grid)
        assert np.array_equal(result.path.q, np.tile(q, (grid.size, 1)))
        assert np.allclose(result.path.p, np.outer(rate, p))
        assert result.defect_max <= 1e-10 and result.cotangent

    @pytest.mark.parametrize('N', [8, 16, 32, 64, 128])
    def test_zero_bivector_on_every_grid_size(self, zero_pi, N):
        grid = Grid.semi_free(N)
        q, p = np.array([0.3, -0.2, 0.1]), np.array([1.0, 2.0, -1.0])
        result = shoot_through(zero_pi, q, p, grid=grid)
        assert np.array_equal(result.path.q, np.tile(q, (grid.size, 1)))
        assert result.path.p[0].tolist() == [0.0] * 3 and result.path.p[-1].tolist() == [0.0] * 3
        assert result.defect_max <= 1e-10 and result.cotangent

    def test_flags_unresolved_path(self, so3):
        q, p = [0.3, -0.2, 0.4], [0.1, 0.2, -0.3]
        coarse = shoot_through(so3, q, p, grid=Grid.semi_free(8))
        fine = shoot_through(so3, q, p, grid=Grid.semi_free(256))
        assert not coarse.cotangent and coarse.to_dict()['cotangent'] is False
        assert fine.cotangent and fine.to_dict()['cotangent'] is True

    def test_symplectic_straight_line(self, symplectic):
        grid = Grid.semi_free(512)
        result = shoot_through(symplectic, [0.0, 0.0], [1.0, 0.0], grid=grid)
        psi, _ = bump_reparam(0.25, grid)
        assert result.defect_max <= 1e-7
        assert np.allclose(result.path.q[:, 0], 0.0, atol=1e-14)
        assert np.allclose(result.path.q[:, 1], -(psi - 0.5), atol=1e-9)

    @pytest.mark.parametrize('point', [
        ([0.3, -0.2, 0.4], [0.1, 0.2, -0.3]),
        ([-0.5, 0.1, 0.2], [0.4, -0.4, 0.1]),
    ])
    def test_so3_paths_are_cotangent(self, so3, point):
        q, p = point
        result = shoot_through(so3, q, p, grid=Grid.semi_free(256))
        assert is_cotangent(so3, result.path, 1e-6 * path_scale(so3, result.path))
        assert result.through_point_error <= 1e-6
        assert result.integration_error <= 1e-8

    def test_hits_point_at_half(self, non_poisson):
        grid = Grid.semi_free(128)
        q, p = np.array([0.1, 0.2, 0.3]), np.array([-0.2, 0.3, 0.1])
        result = shoot_through(non_poisson, q, p, grid=grid)
        qm, pm = result.path.node(grid.mid_index)
        assert np.array_equal(qm, q) and np.array_equal(pm, p)

    def test_loop_in_kernel_is_constant(self, so3):
        grid = Grid.periodic(64)
        q = np.array([0.0, 0.0, 1.0])
        p = np.array([0.0, 0.0, 2.0])
        result = shoot_through(so3, q, p, grid=grid)
        assert np.allclose(result.path.q, q, atol=1e-14)
        assert result.defect_max <= 1e-10

    def test_periodic_loop_closes(self, so3):
        grid = Grid.periodic(128)
        result = shoot_through(so3, [0.3, -0.2, 0.4], [0.1, 0.2, -0.3], grid=grid)
        assert result.defect_max <= 1e-6 * path_scale(so3, result.path)

    def test_dimension_mismatch(self, so3):
        with pytest.raises(DimensionError):
            shoot_through(so3, [0.0, 0.0], [1.0, 0.0])

    def test_eps_out_of_range(self, so3):
        with pytest.raises(BoundaryError):
            shoot_through(so3, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], eps=0.6)

    def test_divergence(self):
        q1 = Polynomial.variable(2, 1)
        pi = BivectorField(2, {(1, 2): q1 * q1 * q1})
        with pytest.raises(ShootingError):
            shoot_through(pi, [5.0, 0.0], [0.0, 50.0], eps=0.4, grid=Grid.semi_free(32))
