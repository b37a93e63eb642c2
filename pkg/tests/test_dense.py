"""Tests for the dense linear algebra primitives."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normattain.errors import NoConvergence, NotHermitian, ValidationError
from normattain.linalg import (
    as_matrix,
    check_orthogonal_projection,
    hermitian_eig,
    largest_singular_value,
    max_abs,
    orthonormal_range,
    projector,
)


def _random_hermitian(seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return z + z.conj().T


class TestHermitianEig:
    def test_diagonal_matrix(self):
        eig = hermitian_eig(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(eig.values, [-1.0, 2.0, 3.0])

    def test_two_by_two_complex(self):
        m = as_matrix([[2, 1j], [-1j, 2]])
        eig = hermitian_eig(m)
        assert np.allclose(eig.values, [1.0, 3.0], atol=1e-12)
        assert np.allclose(eig.reconstruct(), m, atol=1e-12)

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 9))
    @settings(max_examples=40, deadline=None)
    def test_matches_lapack(self, seed, n):
        m = _random_hermitian(seed, n)
        eig = hermitian_eig(m)
        assert np.allclose(eig.values, np.linalg.eigvalsh(m), atol=1e-10)
        assert np.allclose(eig.vectors.conj().T @ eig.vectors, np.eye(n), atol=1e-10)
        assert np.allclose(eig.reconstruct(), m, atol=1e-9)

    def test_values_ascending(self):
        eig = hermitian_eig(_random_hermitian(7, 6))
        assert np.all(np.diff(eig.values) >= 0)

    def test_zero_matrix(self):
        eig = hermitian_eig(np.zeros((3, 3)))
        assert np.allclose(eig.values, 0.0)
        assert np.allclose(eig.vectors, np.eye(3))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError):
            hermitian_eig(np.zeros((2, 3)))

    def test_sweep_cap(self):
        with pytest.raises(NoConvergence):
            hermitian_eig(_random_hermitian(3, 4), max_sweeps=0)

    def test_select(self):
        eig = hermitian_eig(np.diag([0.0, 1.0, 1.0]))
        ones = eig.select(eig.values > 0.5)
        assert ones.vectors.shape == (3, 2)


class TestHelpers:
    def test_as_matrix_rejects_vectors(self):
        with pytest.raises(ValidationError):
            as_matrix([1, 2, 3])

    def test_as_matrix_rejects_nan(self):
        with pytest.raises(ValidationError):
            as_matrix([[1.0, float("nan")]])

    def test_max_abs_empty(self):
        assert max_abs(np.zeros((0, 0))) == 0.0

    def test_largest_singular_value(self):
        assert largest_singular_value([[3, 0], [0, -4]]) == pytest.approx(4.0)
        assert largest_singular_value(np.zeros((2, 2))) == 0.0

    def test_orthonormal_range_rank(self):
        basis = orthonormal_range([[1, 1], [1, 1]])
        assert basis.shape == (2, 1)
        assert np.allclose(projector(basis), 0.5 * np.ones((2, 2)))

    def test_orthonormal_range_of_zero(self):
        assert orthonormal_range(np.zeros((3, 3))).shape == (3, 0)

    def test_check_orthogonal_projection(self):
        q = as_matrix([[0.64, 0.48], [0.48, 0.36]])
        assert check_orthogonal_projection(q)
        assert not check_orthogonal_projection(as_matrix([[1, -2], [0, 0]]))
        assert not check_orthogonal_projection(np.eye(2, 3))
