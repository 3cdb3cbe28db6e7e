import numpy as np
import pytest

from cotangent.counterexample import DIRECTIONS, tangent_cone_probe, x_dx_dy
from geometry.bivector import is_poisson
from pathspace.grid import Grid
from pathspace.sampling import sample_points
from utils.logger import BoundaryError


class TestXdxdy:
    def test_entries(self):
        pi = x_dx_dy()
        m = pi.matrices(np.array([[3.0, -1.0]]))[0]
        assert m.tolist() == [[0.0, 3.0], [-3.0, 0.0]]

    def test_is_poisson_in_two_dimensions(self, rng):
        assert is_poisson(x_dx_dy(), sample_points(2, 20, rng)).poisson


class TestTangentCone:
    @pytest.mark.parametrize('eps', [1e-3, 1e-2, 1e-1])
    def test_sum_of_directions_is_not_tangent(self, eps):
        result = tangent_cone_probe(eps)
        assert result.res_u <= 1e-9
        assert result.res_v <= 1e-9
        assert result.res_uv >= 0.4 * eps ** 2
        assert abs(result.holonomy_uv - eps) <= eps ** 2
        assert result.passes()

    def test_single_directions_stop_at_once(self):
        result = tangent_cone_probe(1e-2)
        for name in ('u', 'v'):
            assert len(result.histories[name]) == 1
            assert result.histories[name][0] <= 1e-12

    def test_sum_of_directions_keeps_best_iterate(self):
        result = tangent_cone_probe(1e-2)
        history = result.histories['u+v']
        assert len(history) > 1
        assert min(history) == pytest.approx(result.res_uv)

    def test_insensitive_to_mode_count(self):
        few, many = tangent_cone_probe(1e-2, modes=4), tangent_cone_probe(1e-2, modes=16)
        assert abs(few.res_uv - many.res_uv) <= 0.1 * max(few.res_uv, many.res_uv)

    def test_directions(self):
        assert set(DIRECTIONS) == {'u', 'v', 'u+v'}
        assert np.array_equal(DIRECTIONS['u+v'], DIRECTIONS['u'] + DIRECTIONS['v'])

    def test_report(self):
        payload = tangent_cone_probe(1e-2, modes=4).to_dict()
        assert payload['modes'] == 4
        assert payload['gap_bound'] == pytest.approx(0.4e-4)
        assert set(payload['iterations']) == {'u', 'v', 'u+v'}

    @pytest.mark.parametrize('kwargs, where', [
        ({'eps': 0.2}, 'eps'),
        ({'eps': 0.0}, 'eps'),
        ({'eps': 1e-2, 'modes': 3}, 'modes'),
        ({'eps': 1e-2, 'modes': 40, 'grid': Grid.periodic(64)}, 'modes'),
        ({'eps': 1e-2, 'grid': Grid.semi_free(64)}, 'grid'),
    ])
    def test_rejects_bad_input(self, kwargs, where):
        with pytest.raises(BoundaryError) as excinfo:
            tangent_cone_probe(**kwargs)
        assert excinfo.value.where == where
