"""Tests for the dense linear-algebra kernel: vectorization, Frobenius
inner products, Kronecker products, Hermitian eigensolves, and the
matrix exponential and principal logarithm."""

import numpy as np
import pytest

from floquet_lindblad import (
    BranchCutError,
    ConditioningError,
    DimensionMismatchError,
    HermiticityError,
    devectorize,
    frobenius_inner,
    hermiticity_defect,
    herm_eigs,
    kron,
    matrix_exp,
    matrix_log_principal,
    vectorize,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def random_complex(rng, dim):
    """Dense complex square matrix with standard normal entries."""
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal(
        (dim, dim)
    )


def test_vectorize_identity_is_basis_rows():
    """vectorize flattens row major, so I_2 becomes (1, 0, 0, 1)."""
    np.testing.assert_allclose(
        vectorize(np.eye(2)), np.array([1.0, 0.0, 0.0, 1.0])
    )


def test_vectorize_sandwich_homomorphism():
    """vectorize(A rho B) equals (A kron B^T) vectorize(rho)."""
    rng = np.random.default_rng(3)
    for dim in (2, 4):
        for _ in range(50):
            a = random_complex(rng, dim)
            rho = random_complex(rng, dim)
            b = random_complex(rng, dim)
            direct = vectorize(a @ rho @ b)
            lifted = kron(a, b.T) @ vectorize(rho)
            np.testing.assert_allclose(direct, lifted, atol=1e-12)


def test_devectorize_inverts_vectorize():
    """devectorize is the exact inverse of vectorize on 3x3 input."""
    rng = np.random.default_rng(5)
    rho = random_complex(rng, 3)
    np.testing.assert_allclose(devectorize(vectorize(rho)), rho)


def test_devectorize_rejects_non_square_length():
    """A vector whose length is not a perfect square is rejected."""
    with pytest.raises(DimensionMismatchError):
        devectorize(np.zeros(5))


def test_frobenius_inner_of_identity_counts_dimension():
    """<I, I> equals the matrix dimension."""
    assert frobenius_inner(np.eye(3), np.eye(3)) == pytest.approx(3.0)


def test_frobenius_inner_of_orthogonal_paulis_vanishes():
    """Distinct normalized Pauli matrices are Frobenius orthogonal."""
    value = frobenius_inner(SIGMA_X / np.sqrt(2), SIGMA_Y / np.sqrt(2))
    assert abs(value) == pytest.approx(0.0, abs=1e-15)


def test_frobenius_inner_is_antilinear_in_first_argument():
    """<alpha A, B> equals conj(alpha) <A, B>."""
    rng = np.random.default_rng(7)
    a = random_complex(rng, 2)
    b = random_complex(rng, 2)
    alpha = 0.3 - 1.7j
    assert frobenius_inner(alpha * a, b) == pytest.approx(
        np.conj(alpha) * frobenius_inner(a, b)
    )


def test_kron_of_identities_is_identity():
    """I_2 kron I_2 equals I_4."""
    np.testing.assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_of_sigma_z_pair_is_diagonal_signs():
    """sigma_z kron sigma_z equals diag(1, -1, -1, 1)."""
    np.testing.assert_allclose(
        kron(SIGMA_Z, SIGMA_Z), np.diag([1.0, -1.0, -1.0, 1.0])
    )


def test_kron_mixed_product_identity():
    """(A kron B)(C kron D) equals AC kron BD for random factors."""
    rng = np.random.default_rng(11)
    a, b, c, d = (random_complex(rng, 2) for _ in range(4))
    np.testing.assert_allclose(
        kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12
    )


def test_hermiticity_defect_measures_max_deviation():
    """The defect is the max-norm distance from the adjoint."""
    matrix = np.array([[1.0, 2.0 + 1.0j], [2.0 - 1.0j, 3.0]])
    assert hermiticity_defect(matrix) == pytest.approx(0.0)
    matrix[0, 1] += 0.5
    assert hermiticity_defect(matrix) == pytest.approx(0.5)


def test_herm_eigs_sorts_ascending():
    """diag(2, -1) yields eigenvalues (-1, 2)."""
    eigenvalues, _ = herm_eigs(np.diag([2.0, -1.0]))
    np.testing.assert_allclose(eigenvalues, [-1.0, 2.0])


def test_herm_eigs_pauli_x_spectrum():
    """sigma_x has eigenvalues (-1, 1)."""
    eigenvalues, _ = herm_eigs(SIGMA_X)
    np.testing.assert_allclose(eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_herm_eigs_rank_one_projector_spectrum():
    """diag(1, 0, 0, 0) has spectrum (0, 0, 0, 1)."""
    eigenvalues, _ = herm_eigs(np.diag([1.0, 0.0, 0.0, 0.0]))
    np.testing.assert_allclose(eigenvalues, [0.0, 0.0, 0.0, 1.0])


def test_herm_eigs_residual_and_phase_are_deterministic():
    """Eigenpairs satisfy the residual bound with pinned vector phases."""
    rng = np.random.default_rng(13)
    raw = random_complex(rng, 6)
    matrix = raw + raw.conj().T
    eigenvalues, vectors = herm_eigs(matrix)
    scale = np.linalg.norm(matrix)
    for col in range(6):
        residual = np.linalg.norm(
            matrix @ vectors[:, col] - eigenvalues[col] * vectors[:, col]
        )
        assert residual <= 1e-9 * scale
    again_values, again_vectors = herm_eigs(matrix.copy())
    np.testing.assert_allclose(again_values, eigenvalues)
    np.testing.assert_allclose(again_vectors, vectors)


def test_herm_eigs_rejects_non_hermitian():
    """Input beyond the Hermiticity tolerance raises."""
    with pytest.raises(HermiticityError):
        herm_eigs(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_matrix_exp_of_zero_is_identity():
    """exp(0) equals I."""
    np.testing.assert_allclose(matrix_exp(np.zeros((3, 3))), np.eye(3))


def test_matrix_exp_pauli_rotation_closed_form():
    """exp(i pi sigma_x / 2) equals i sigma_x."""
    np.testing.assert_allclose(
        matrix_exp(0.5j * np.pi * SIGMA_X), 1j * SIGMA_X, atol=1e-12
    )


def test_matrix_exp_inverse_identity():
    """exp(M) exp(-M) equals I for random bounded matrices."""
    rng = np.random.default_rng(17)
    for _ in range(10):
        matrix = random_complex(rng, 4)
        matrix *= 5.0 / np.linalg.norm(matrix)
        product = matrix_exp(matrix) @ matrix_exp(-matrix)
        np.testing.assert_allclose(product, np.eye(4), atol=1e-10)


def test_matrix_log_of_identity_is_zero():
    """log(I) equals the zero matrix."""
    np.testing.assert_allclose(
        matrix_log_principal(np.eye(4)), np.zeros((4, 4)), atol=1e-12
    )


def test_matrix_log_inverts_exp_for_generators():
    """log(exp(L tau)) / tau recovers L at small tau."""
    rng = np.random.default_rng(19)
    generator = random_complex(rng, 4)
    tau = 0.01
    recovered = matrix_log_principal(matrix_exp(generator * tau)) / tau
    np.testing.assert_allclose(recovered, generator, atol=1e-8)


def test_matrix_log_rejects_negative_axis_eigenvalue():
    """An eigenvalue on the negative real axis is a branch ambiguity."""
    with pytest.raises(BranchCutError):
        matrix_log_principal(np.diag([-1.0, 1.0]))


def test_matrix_log_rejects_zero_eigenvalue():
    """A singular matrix has no logarithm."""
    with pytest.raises(BranchCutError):
        matrix_log_principal(np.diag([0.0, 1.0]))


def test_matrix_log_rejects_near_defective_input():
    """A nearly defective matrix fails the conditioning guard."""
    matrix = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    with pytest.raises(ConditioningError):
        matrix_log_principal(matrix)
