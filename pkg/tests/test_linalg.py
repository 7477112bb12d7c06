# coding: utf-8
import numpy as np
import pytest

from mmhybrid.exceptions import DimensionMismatch, NonFiniteError
from mmhybrid.linalg import as_complex_matrix, frobenius_norm, hermitian, is_orthonormal, matmul, svd
from mmhybrid.utils.rng import seeded_stream

hermitian_cases = [
    (np.diag([1.0, -2.0, 3.5]), np.diag([1.0, -2.0, 3.5])),
    ([[3 + 4j]], [[3 - 4j]]),
    ([[1, 2j], [3, 4]], [[1, 3], [-2j, 4]]),
]


@pytest.mark.parametrize("a,expected", hermitian_cases)
def test_hermitian(a, expected):
    np.testing.assert_array_equal(hermitian(a), np.asarray(expected, dtype=np.complex128))


def test_hermitian_is_involution(random_channel):
    a = random_channel(3, 5)
    np.testing.assert_array_equal(hermitian(hermitian(a)), a)


def test_matmul_hand_expansion():
    a = [[1 + 1j, 0], [0, 2]]
    b = [[1, 1], [1, 0]]
    np.testing.assert_array_equal(matmul(a, b), [[1 + 1j, 1 + 1j], [2, 0]])


def test_matmul_identity_and_zero(random_channel):
    a = random_channel(3, 4)
    np.testing.assert_array_equal(matmul(a, np.eye(4)), a)
    np.testing.assert_array_equal(matmul(a, np.zeros((4, 2))), np.zeros((3, 2)))


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_vector_becomes_column():
    assert as_complex_matrix([1, 2, 3]).shape == (3, 1)


def test_as_complex_matrix_rejects_tensors():
    with pytest.raises(DimensionMismatch):
        as_complex_matrix(np.ones((2, 2, 2)))


@pytest.mark.parametrize("shape", [(4, 4), (6, 3), (3, 6), (1, 5)])
def test_svd_reconstructs(random_channel, shape):
    a = random_channel(*shape)
    u, s, v = svd(a)
    k = min(shape)
    assert u.shape == (shape[0], k) and v.shape == (shape[1], k)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    assert np.linalg.norm(u @ np.diag(s) @ hermitian(v) - a) <= 1e-10 * max(1.0, frobenius_norm(a))
    assert is_orthonormal(u) and is_orthonormal(v)


def test_svd_identity():
    _, s, _ = svd(np.eye(5))
    np.testing.assert_allclose(s, np.ones(5))


def test_svd_rank_one():
    u = np.array([1, 1j, 0]) / np.sqrt(2)
    v = np.array([0, 1, 1, -1j]) / np.sqrt(3)
    g = 2.0 - 1.5j
    _, s, _ = svd(g * np.outer(u, np.conj(v)))
    assert s[0] == pytest.approx(abs(g), abs=1e-12)
    np.testing.assert_allclose(s[1:], 0, atol=1e-12)


@pytest.mark.parametrize("bad", [np.nan, np.inf])
def test_svd_rejects_non_finite(bad):
    a = np.eye(3, dtype=complex)
    a[1, 2] = bad
    with pytest.raises(NonFiniteError):
        svd(a)


frobenius_cases = [
    (np.zeros((3, 2)), 0.0),
    (np.eye(4), 2.0),
    ([[3, 4j]], 5.0),
]


@pytest.mark.parametrize("a,expected", frobenius_cases)
def test_frobenius_norm(a, expected):
    assert frobenius_norm(a) == pytest.approx(expected)


def test_is_orthonormal():
    assert is_orthonormal(np.eye(3)[:, :2])
    assert not is_orthonormal([[1, 1], [0, 1]])


@pytest.mark.parametrize("shape", [(1, 1), (3, 5), (8, 8), (16, 2)])
def test_frobenius_norm_is_trace(random_channel, shape):
    a = random_channel(*shape)
    trace = np.real(np.trace(hermitian(a) @ a))
    assert frobenius_norm(a) ** 2 == pytest.approx(trace, rel=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_svd_random_sweep(seed):
    rng = seeded_stream(seed)
    for _ in range(250):
        m, n = rng.integers(1, 17, size=2)
        a = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        u, s, v = svd(a)
        scale = max(1.0, frobenius_norm(a))
        assert np.linalg.norm(u @ np.diag(s) @ hermitian(v) - a) <= 1e-9 * scale
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        assert is_orthonormal(u, 1e-9) and is_orthonormal(v, 1e-9)
