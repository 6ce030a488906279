import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from components.errors import NotPSDError, UsageError, ValidationError
from components.linalg_kernel import (
    IDENTITY_2,
    IDENTITY_4,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    adjoint,
    as_matrix,
    hermitian_eig,
    kron,
    mat_mul,
    psd_sqrt,
)

BELL_PHI_PLUS = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2.0


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def test_mat_mul_identities():
    m = np.arange(16).reshape(4, 4) * (1 + 1j)
    assert_array_equal(mat_mul(IDENTITY_4, m), m)
    assert_array_equal(mat_mul(SIGMA_X, SIGMA_X), IDENTITY_2)
    assert_allclose(mat_mul(SIGMA_X, SIGMA_Y), 1j * SIGMA_Z)


def test_mat_mul_dimension_mismatch():
    with pytest.raises(UsageError):
        mat_mul(IDENTITY_2, IDENTITY_4)


@pytest.mark.parametrize("bad", [np.eye(5), np.ones((2, 3)), np.array([[np.nan, 0], [0, 1]])])
def test_as_matrix_rejects(bad):
    with pytest.raises(UsageError):
        as_matrix(bad)


def test_kron():
    assert_array_equal(kron(IDENTITY_2, IDENTITY_2), IDENTITY_4)
    assert_array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))
    with pytest.raises(UsageError):
        kron(IDENTITY_4, IDENTITY_2)


def test_adjoint():
    m = np.array([[1, 2j], [3, 4 - 1j]])
    assert_array_equal(adjoint(m), np.array([[1, 3], [-2j, 4 + 1j]]))


def test_eig_diagonal():
    values, vectors = hermitian_eig(np.diag([4.0, 1.0, 3.0, 2.0]))
    assert_array_equal(values, [4.0, 3.0, 2.0, 1.0])
    assert_array_equal(np.abs(vectors), np.eye(4)[:, [0, 2, 3, 1]])


def test_eig_pauli_and_projector():
    values, _ = hermitian_eig(SIGMA_X)
    assert_allclose(values, [1.0, -1.0], atol=1e-15)
    values, _ = hermitian_eig(BELL_PHI_PLUS)
    assert_allclose(values, [1.0, 0.0, 0.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eig_random_hermitian(rng, n):
    for _ in range(50):
        m = random_hermitian(rng, n)
        values, vectors = hermitian_eig(m)
        assert np.all(np.diff(values) <= 0)
        assert_allclose(values, np.linalg.eigvalsh(m)[::-1], atol=1e-12)
        assert_allclose(vectors.conj().T @ vectors, np.eye(n), atol=1e-12)
        assert_allclose((vectors * values) @ vectors.conj().T, m, atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        hermitian_eig(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_psd_sqrt_examples():
    assert_allclose(psd_sqrt(IDENTITY_4), IDENTITY_4, atol=1e-15)
    assert_allclose(psd_sqrt(np.diag([4.0, 9.0, 0.0, 1.0])), np.diag([2.0, 3.0, 0.0, 1.0]), atol=1e-15)
    assert_allclose(psd_sqrt(BELL_PHI_PLUS), BELL_PHI_PLUS, atol=1e-12)


def test_psd_sqrt_squares_back(rng):
    for _ in range(50):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g @ g.conj().T
        root = psd_sqrt(m)
        assert_allclose(root @ root, m, atol=1e-10)
        assert_allclose(root, root.conj().T, atol=1e-12)


def test_psd_sqrt_clips_tiny_negative():
    root = psd_sqrt(np.diag([1.0, -1e-12]))
    assert_allclose(root, np.diag([1.0, 0.0]))


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_kron_mixed_product(rng):
    for _ in range(50):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


def test_kron_sigma_x_flips_first_factor():
    # row-major blocks: index 2 * i_A + i_B, so sigma_x on A moves i_A -> 1 - i_A
    expected = np.zeros((4, 4))
    for i_a in (0, 1):
        for i_b in (0, 1):
            expected[2 * (1 - i_a) + i_b, 2 * i_a + i_b] = 1.0
    assert_array_equal(kron(SIGMA_X, IDENTITY_2), expected)
