"""Dense linear-algebra kernels shared by the whole package.

Conventions
-----------
* Density matrices are flattened row major: ``vectorize(M)`` is
  ``M.reshape(d * d)`` in C order, so the matrix product ``A @ rho @ B``
  turns into ``kron(A, B.T) @ vectorize(rho)``.
* Hermitian eigendecompositions are deterministic: eigenvalues ascend and
  each eigenvector's first significant component is rotated to be real
  and positive.
* All functions accept and return plain ``numpy`` arrays; inputs are
  never mutated.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    BranchCutError,
    ConditioningError,
    DimensionMismatchError,
    HermiticityError,
)

__all__ = [
    "vectorize",
    "devectorize",
    "frobenius_inner",
    "kron",
    "hermiticity_defect",
    "herm_eigs",
    "matrix_exp",
    "matrix_log_principal",
]

#: Relative Hermiticity tolerance (max-norm) used by :func:`herm_eigs`.
HERMITICITY_RTOL = 1e-10

#: Angular distance from the negative real axis below which a matrix
#: logarithm is considered branch ambiguous.
BRANCH_ANGLE_TOL = 1e-6

#: Eigenvector condition number above which the similarity-transform
#: logarithm is considered unreliable.
LOG_CONDITION_LIMIT = 1e10


def _require_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(
            f"{name} must be square, got shape {arr.shape}"
        )
    return arr


def vectorize(matrix: np.ndarray) -> np.ndarray:
    """Flatten a d x d matrix into a length d^2 vector, row major."""
    arr = _require_square(matrix)
    return arr.reshape(-1).copy()


def devectorize(vector: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`: reshape a length d^2 vector to d x d.

    :raises DimensionMismatchError: if the length is not a perfect square.
    """
    vec = np.asarray(vector)
    if vec.ndim != 1:
        raise DimensionMismatchError(
            f"expected a 1-D vector, got shape {vec.shape}"
        )
    dim = int(round(np.sqrt(vec.size)))
    if dim * dim != vec.size:
        raise DimensionMismatchError(
            f"vector length {vec.size} is not a perfect square"
        )
    return vec.reshape(dim, dim).copy()


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Frobenius inner product Tr[a^dagger b] of two same-shaped square
    matrices (antilinear in the first argument)."""
    a_arr = _require_square(a, "a")
    b_arr = _require_square(b, "b")
    if a_arr.shape != b_arr.shape:
        raise DimensionMismatchError(
            f"shape mismatch {a_arr.shape} vs {b_arr.shape}"
        )
    return complex(np.vdot(a_arr, b_arr))


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not factors:
        raise DimensionMismatchError("kron needs at least one factor")
    out = np.asarray(factors[0])
    for factor in factors[1:]:
        out = np.kron(out, np.asarray(factor))
    return out


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Max-norm of M - M^dagger, the absolute deviation from Hermiticity."""
    arr = _require_square(matrix)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def herm_eigs(
    matrix: np.ndarray, rtol: float = HERMITICITY_RTOL
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic eigendecomposition of a Hermitian matrix.

    The input must be Hermitian to within ``rtol`` relative to its largest
    entry; it is then symmetrized before the dense solve so roundoff in the
    caller cannot leak into the spectrum. Eigenvalues come back ascending.
    Each eigenvector is normalized and its first component of significant
    magnitude is made real and positive, which pins the overall phase.

    :param matrix: square Hermitian candidate.
    :param rtol: relative Hermiticity tolerance (max norm).
    :return: ``(eigenvalues, eigenvectors)`` with eigenvectors in columns.
    :raises HermiticityError: if the Hermiticity check fails.
    """
    arr = _require_square(matrix).astype(complex)
    scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    defect = hermiticity_defect(arr)
    if scale > 0.0 and defect > rtol * scale:
        raise HermiticityError(
            f"matrix deviates from Hermiticity by {defect:.3e} "
            f"(limit {rtol * scale:.3e})"
        )
    sym = 0.5 * (arr + arr.conj().T)
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    eigenvectors = eigenvectors.copy()
    for col in range(eigenvectors.shape[1]):
        vec = eigenvectors[:, col]
        peak = float(np.max(np.abs(vec)))
        if peak == 0.0:
            continue
        significant = np.nonzero(np.abs(vec) > 1e-12 * peak)[0]
        anchor = vec[significant[0]]
        phase = anchor / abs(anchor)
        eigenvectors[:, col] = vec / phase
    return eigenvalues, eigenvectors


def matrix_exp(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square matrix (scaling and squaring)."""
    arr = _require_square(matrix)
    return scipy.linalg.expm(arr)


def matrix_log_principal(
    matrix: np.ndarray,
    branch_tol: float = BRANCH_ANGLE_TOL,
    condition_limit: float = LOG_CONDITION_LIMIT,
) -> np.ndarray:
    """Principal matrix logarithm via diagonalization, with guard rails.

    The input is diagonalized, the principal scalar logarithm is applied to
    the eigenvalues, and the similarity transform is undone. Two failure
    modes are detected rather than silently producing a wrong branch:

    * an eigenvalue at zero, or within ``branch_tol`` angular distance of
      the negative real axis, makes the principal branch ambiguous;
    * an eigenvector matrix with condition number above
      ``condition_limit`` makes the transform numerically untrustworthy.

    :raises BranchCutError: for the branch ambiguity case.
    :raises ConditioningError: for the ill-conditioned case.
    """
    arr = _require_square(matrix).astype(complex)
    eigenvalues, eigenvectors = np.linalg.eig(arr)
    moduli = np.abs(eigenvalues)
    scale = float(np.max(moduli)) if moduli.size else 0.0
    if scale == 0.0 or np.any(moduli <= 1e-300 * max(scale, 1.0)):
        raise BranchCutError(
            "matrix has a zero (or numerically zero) eigenvalue; "
            "no logarithm exists"
        )
    angles = np.angle(eigenvalues)
    off_axis = np.pi - np.abs(angles)
    if np.any(off_axis < branch_tol):
        worst = float(np.min(off_axis))
        raise BranchCutError(
            f"eigenvalue within {worst:.3e} rad of the negative real axis "
            f"(limit {branch_tol:.3e}); principal branch is ambiguous"
        )
    condition = float(np.linalg.cond(eigenvectors))
    if not np.isfinite(condition) or condition > condition_limit:
        raise ConditioningError(
            f"eigenvector condition number {condition:.3e} exceeds "
            f"{condition_limit:.3e}; logarithm unreliable"
        )
    log_eigs = np.log(eigenvalues)
    return eigenvectors @ np.diag(log_eigs) @ np.linalg.inv(eigenvectors)
