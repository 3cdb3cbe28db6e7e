import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from algebra.polynomial import Polynomial
from geometry.bivector import (
    BivectorField,
    coefficient_sup,
    dpi_star,
    is_casimir_function,
    is_poisson,
    jacobi_oracle,
    jacobi_pairing,
    jacobiator,
    poisson_bracket,
    sharp,
    sharp_derivative,
)
from pathspace.sampling import sample_points
from utils.logger import BoundaryError, DimensionError


vectors3 = arrays(np.float64, 3, elements=st.floats(-2.0, 2.0))


def dense_so3(q):
    return np.array([[0.0, q[2], -q[1]], [-q[2], 0.0, q[0]], [q[1], -q[0], 0.0]])


class TestBivectorField:
    def test_skew_completion(self, so3):
        assert so3.entry(2, 1) == -so3.entry(1, 2)
        assert so3.entry(2, 2).is_zero()

    def test_matrix_matches_dense(self, so3):
        q = np.array([0.3, -1.2, 0.7])
        assert np.array_equal(so3.matrix(q), dense_so3(q))

    def test_rejects_lower_pairs(self):
        with pytest.raises(DimensionError):
            BivectorField(2, {(2, 1): Polynomial.variable(2, 1)})

    def test_rejects_wrong_variable_count(self):
        with pytest.raises(DimensionError):
            BivectorField(3, {(1, 2): Polynomial.variable(2, 1)})


class TestSharp:
    def test_linear_entry(self, x_dx_dy):
        assert np.array_equal(sharp(x_dx_dy, [2.0, 5.0], [3.0, 4.0]), [8.0, -6.0])

    def test_zero_covector(self, so3):
        assert np.array_equal(sharp(so3, [1.0, 2.0, 3.0], np.zeros(3)), np.zeros(3))

    def test_so3_against_dense_matrix(self, so3):
        q, p = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        result = sharp(so3, q, p)
        assert np.array_equal(result, [0.0, 0.0, -1.0])
        assert np.array_equal(result, dense_so3(q) @ p)

    def test_dimension_mismatch(self, so3):
        with pytest.raises(DimensionError):
            sharp(so3, [1.0, 2.0], [1.0, 2.0, 3.0])


class TestSharpDerivative:
    def test_along_varying_coordinate(self, x_dx_dy):
        assert np.array_equal(sharp_derivative(x_dx_dy, [2.0, 5.0], [1.0, 0.0], [3.0, 4.0]), [4.0, -3.0])

    def test_along_constant_coordinate(self, x_dx_dy):
        assert np.array_equal(sharp_derivative(x_dx_dy, [2.0, 5.0], [0.0, 1.0], [3.0, 4.0]), [0.0, 0.0])

    def test_matches_finite_difference(self, so3, rng):
        q, u, p = rng.uniform(-1, 1, (3, 3))
        step = 1e-6
        numeric = (sharp(so3, q + step * u, p) - sharp(so3, q - step * u, p)) / (2 * step)
        exact = sharp_derivative(so3, q, u, p)
        assert np.max(np.abs(numeric - exact)) <= 1e-7 * max(1.0, np.max(np.abs(exact)))


class TestJacobiator:
    def test_two_dimensions_vanish(self, x_dx_dy, rng):
        for q in rng.uniform(-1, 1, (10, 2)):
            assert jacobiator(x_dx_dy, q).max_abs() == 0.0

    def test_so3_vanishes(self, so3, rng):
        for q in rng.uniform(-1, 1, (20, 3)):
            assert jacobiator(so3, q).max_abs() <= 1e-12

    def test_non_poisson_component(self, non_poisson):
        value = jacobiator(non_poisson, [0.0, 0.0, 2.0]).component(1, 2, 3)
        assert value == pytest.approx(-2.0, abs=1e-10)

    def test_totally_antisymmetric(self, non_poisson, rng):
        for q in rng.uniform(-1, 1, (10, 3)):
            assert jacobiator(non_poisson, q).antisymmetry_defect() <= 1e-12

    @given(vectors3)
    @settings(max_examples=30, deadline=None)
    def test_matches_nested_bracket_oracle(self, q):
        pi = BivectorField(3, {(1, 2): Polynomial.variable(3, 3), (2, 3): Polynomial.variable(3, 2)})
        tensor = jacobiator(pi, q)
        for r, s, j in [(1, 2, 3), (2, 3, 1), (1, 3, 2), (1, 1, 2)]:
            oracle = jacobi_oracle(pi, r, s, j).evaluate(q)
            assert tensor.component(r, s, j) == pytest.approx(oracle, rel=1e-10, abs=1e-12)


class TestDpiStar:
    def test_linear_entry(self, x_dx_dy):
        assert np.array_equal(dpi_star(x_dx_dy, [0.5, 0.5], [1.0, 0.0], [0.0, 1.0]), [-1.0, 0.0])

    def test_constant_bivector(self, symplectic, rng):
        q, alpha, beta = rng.uniform(-1, 1, (3, 2))
        assert np.array_equal(dpi_star(symplectic, q, alpha, beta), [0.0, 0.0])

    def test_pairing_identity(self, so3, rng):
        q, alpha, beta, u = rng.uniform(-1, 1, (4, 3))
        left = dpi_star(so3, q, alpha, beta) @ u
        right = -(sharp_derivative(so3, q, u, beta) @ alpha)
        assert left == pytest.approx(right, rel=1e-12, abs=1e-14)


class TestIsPoisson:
    def test_so3(self, so3):
        check = is_poisson(so3, sample_points(3, 100, np.random.default_rng(0), 1.0), tol=1e-10)
        assert check.poisson
        assert check.witness is None

    def test_non_poisson_reports_witness(self, non_poisson, rng):
        points = np.vstack([sample_points(3, 20, rng), [[0.0, 0.0, 2.0]]])
        check = is_poisson(non_poisson, points)
        assert not check.poisson
        assert check.max_abs_J >= 2.0
        assert check.witness is not None

    def test_planar_bivectors_always_pass(self, x_dx_dy, rng):
        assert is_poisson(x_dx_dy, sample_points(2, 50, rng)).poisson

    def test_needs_points(self, so3):
        with pytest.raises(BoundaryError):
            is_poisson(so3, np.zeros((0, 3)))


class TestJacobiPairing:
    def test_equals_contraction(self, non_poisson, rng):
        for _ in range(10):
            q, a1, a2, p = rng.uniform(-1, 1, (4, 3))
            expected = jacobiator(non_poisson, q).contract(a1, a2, p)
            assert jacobi_pairing(non_poisson, q, a1, a2, p) == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_vanishes_for_so3(self, so3, rng):
        q, a1, a2, p = rng.uniform(-1, 1, (4, 3))
        assert abs(jacobi_pairing(so3, q, a1, a2, p)) <= 1e-12


class TestPoissonBracket:
    def test_so3_coordinates(self, so3):
        q1, q2 = Polynomial.variable(3, 1), Polynomial.variable(3, 2)
        assert poisson_bracket(so3, q1, q2) == Polynomial.variable(3, 3)

    def test_casimir(self, so3, rng):
        h = sum((Polynomial.variable(3, k) * Polynomial.variable(3, k) for k in (1, 2, 3)), Polynomial.zero(3))
        verdict, worst = is_casimir_function(so3, h, rng.uniform(-1, 1, (20, 3)))
        assert verdict and worst == 0.0
        verdict, _ = is_casimir_function(so3, Polynomial.variable(3, 1), rng.uniform(-1, 1, (20, 3)))
        assert not verdict


class TestCoefficientSup:
    def test_so3(self, so3):
        assert coefficient_sup(so3, [[0.5, -2.0, 1.0]]) == 2.0

    def test_zero_bivector(self, zero_pi):
        assert coefficient_sup(zero_pi, [[1.0, 1.0, 1.0]]) == 0.0
