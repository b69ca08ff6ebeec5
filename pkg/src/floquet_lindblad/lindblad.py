"""Piecewise-constant Lindblad drives and their vectorized superoperators.

A density matrix evolves under ``d rho / dt = L(t) rho`` with the GKLS
generator

    L rho = -i [H, rho]
            + sum_i gamma_i (L_i rho L_i^dag
                             - (1/2) {L_i^dag L_i, rho}).

With row-major vectorization (``vec(A rho B) = (A x B^T) vec(rho)``) the
generator becomes the dense matrix

    S = -i (H x I - I x H^T)
        + sum_i gamma_i (L_i x conj(L_i)
                         - (1/2) (L_i^dag L_i x I + I x L_i^T conj(L_i))).

Drives are piecewise constant over one period: each
:class:`LindbladSegment` holds a duration plus Hamiltonian and jump terms
with declared site supports, and a :class:`PiecewiseLiouvillian` strings
segments together (half-open in time: segment boundaries belong to the
next segment). The supported envelope is at most 6 sites (Hilbert space
dimension 64).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .core import devectorize, vectorize
from .errors import DimensionMismatchError
from .pauli import (
    code_two_counts,
    embed_local,
    matrix_from_pauli_coefficients,
    quadratic_product_coefficients,
)

if TYPE_CHECKING:  # pragma: no cover - import cycle guard for annotations
    from .liouvillianity import DissipatorMatrix, HamiltonianCoefficients

__all__ = [
    "MAX_NUM_SITES",
    "HamiltonianTerm",
    "JumpTerm",
    "LindbladSegment",
    "PiecewiseLiouvillian",
    "Superoperator",
    "liouvillian_superop",
    "lindblad_form_superop",
    "apply_superop",
    "is_trace_preserving",
    "is_hermiticity_preserving",
]

#: Largest supported number of spin-1/2 sites (Hilbert dimension 2^6).
MAX_NUM_SITES = 6


def _check_term(
    matrix: np.ndarray, sites: tuple[int, ...] | None, what: str
) -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(
            f"{what} must be square, got shape {arr.shape}"
        )
    if sites is not None:
        expected = 2 ** len(sites)
        if arr.shape != (expected, expected):
            raise DimensionMismatchError(
                f"{what} on sites {sites} must have shape "
                f"{(expected, expected)}, got {arr.shape}"
            )
    return arr


def _embed_term(
    matrix: np.ndarray, sites: tuple[int, ...] | None, num_sites: int
) -> np.ndarray:
    dim = 2**num_sites
    if sites is None:
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(
                f"term without declared support must act on the full "
                f"space, expected shape {(dim, dim)}, got {matrix.shape}"
            )
        return matrix
    return embed_local(matrix, sites, num_sites)


@dataclass(frozen=True)
class HamiltonianTerm:
    """One Hamiltonian summand with an optionally declared site support.

    ``matrix`` acts on the ordered tuple ``sites`` (its first tensor
    factor is ``sites[0]``) and must be Hermitian. ``sites=None`` marks a
    full-space matrix with undeclared support; structure checks that need
    supports reject such terms.
    """

    matrix: np.ndarray
    sites: tuple[int, ...] | None

    def __post_init__(self) -> None:
        sites = self.sites
        if sites is not None:
            sites = tuple(int(s) for s in sites)
        object.__setattr__(self, "sites", sites)
        arr = _check_term(self.matrix, sites, "Hamiltonian term")
        object.__setattr__(self, "matrix", arr)

    def embedded(self, num_sites: int) -> np.ndarray:
        return _embed_term(self.matrix, self.sites, num_sites)


@dataclass(frozen=True)
class JumpTerm:
    """One jump channel: operator, nonnegative rate, optional support."""

    rate: float
    matrix: np.ndarray
    sites: tuple[int, ...] | None

    def __post_init__(self) -> None:
        sites = self.sites
        if sites is not None:
            sites = tuple(int(s) for s in sites)
        object.__setattr__(self, "sites", sites)
        arr = _check_term(self.matrix, sites, "jump operator")
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "rate", float(self.rate))
        if self.rate < 0.0:
            raise DimensionMismatchError(
                f"jump rate must be nonnegative, got {self.rate}"
            )

    def embedded(self, num_sites: int) -> np.ndarray:
        return _embed_term(self.matrix, self.sites, num_sites)


@dataclass(frozen=True)
class LindbladSegment:
    """A constant GKLS generator held for a fixed duration."""

    duration: float
    hamiltonian_terms: tuple[HamiltonianTerm, ...] = ()
    jump_terms: tuple[JumpTerm, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(
            self, "hamiltonian_terms", tuple(self.hamiltonian_terms)
        )
        object.__setattr__(self, "jump_terms", tuple(self.jump_terms))
        if self.duration <= 0.0:
            raise DimensionMismatchError(
                f"segment duration must be positive, got {self.duration}"
            )

    def hamiltonian(self, num_sites: int) -> np.ndarray:
        """Total Hamiltonian embedded in the full space."""
        dim = 2**num_sites
        total = np.zeros((dim, dim), dtype=complex)
        for term in self.hamiltonian_terms:
            total += term.embedded(num_sites)
        return total

    def jumps(self, num_sites: int) -> tuple[tuple[float, np.ndarray], ...]:
        """Rate and embedded operator for every jump channel."""
        return tuple(
            (term.rate, term.embedded(num_sites)) for term in self.jump_terms
        )


@dataclass(frozen=True)
class Superoperator:
    """A dense superoperator on a ``system_dim``-dimensional system.

    The matrix acts on row-major vectorized density matrices and is
    treated as immutable.
    """

    matrix: np.ndarray
    system_dim: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.matrix, dtype=complex)
        expected = self.system_dim**2
        if arr.shape != (expected, expected):
            raise DimensionMismatchError(
                f"superoperator for dimension {self.system_dim} must have "
                f"shape {(expected, expected)}, got {arr.shape}"
            )
        object.__setattr__(self, "matrix", arr)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Apply to a density matrix, returning a matrix."""
        return apply_superop(self, rho)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        self._check_compatible(other)
        return Superoperator(self.matrix + other.matrix, self.system_dim)

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        self._check_compatible(other)
        return Superoperator(self.matrix - other.matrix, self.system_dim)

    def __mul__(self, scalar: complex) -> "Superoperator":
        return Superoperator(self.matrix * scalar, self.system_dim)

    __rmul__ = __mul__

    def _check_compatible(self, other: "Superoperator") -> None:
        if self.system_dim != other.system_dim:
            raise DimensionMismatchError(
                f"system dimensions differ: {self.system_dim} vs "
                f"{other.system_dim}"
            )

    def norm(self) -> float:
        """Frobenius norm of the matrix."""
        return float(np.linalg.norm(self.matrix))


@dataclass(frozen=True)
class PiecewiseLiouvillian:
    """A time-periodic drive made of constant segments.

    Segment ``s`` is active on the half-open window
    ``[t_s, t_s + duration_s)``; the period is the sum of durations.
    """

    segments: tuple[LindbladSegment, ...]
    num_sites: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise DimensionMismatchError("drive needs at least one segment")
        if not 1 <= self.num_sites <= MAX_NUM_SITES:
            raise DimensionMismatchError(
                f"num_sites must be in 1..{MAX_NUM_SITES}, got {self.num_sites}"
            )

    @property
    def period(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    @property
    def dim(self) -> int:
        return 2**self.num_sites

    @cached_property
    def segment_superops(self) -> tuple[Superoperator, ...]:
        """The constant generator of every segment, as a superoperator."""
        return tuple(
            liouvillian_superop(
                seg.hamiltonian(self.num_sites),
                seg.jumps(self.num_sites),
                system_dim=self.dim,
            )
            for seg in self.segments
        )

    @cached_property
    def segment_windows(self) -> tuple[tuple[float, float], ...]:
        """Start and end time of every segment within one period."""
        windows = []
        start = 0.0
        for seg in self.segments:
            windows.append((start, start + seg.duration))
            start += seg.duration
        return tuple(windows)


def liouvillian_superop(
    hamiltonian: np.ndarray | None,
    jumps: Sequence[tuple[float, np.ndarray]] = (),
    *,
    system_dim: int | None = None,
) -> Superoperator:
    """Vectorized GKLS generator for a Hamiltonian and jump channels.

    :param hamiltonian: Hermitian matrix or None for no coherent part.
    :param jumps: pairs ``(rate, operator)``. Rates may carry either sign;
        negative values build the formal signed form used by the canonical
        decomposition.
    :param system_dim: required if ``hamiltonian`` is None.
    """
    if hamiltonian is None:
        if system_dim is None:
            raise DimensionMismatchError(
                "system_dim is required when hamiltonian is None"
            )
        dim = system_dim
    else:
        hamiltonian = np.asarray(hamiltonian, dtype=complex)
        dim = hamiltonian.shape[0]
        if hamiltonian.shape != (dim, dim):
            raise DimensionMismatchError(
                f"hamiltonian must be square, got {hamiltonian.shape}"
            )
        if system_dim is not None and system_dim != dim:
            raise DimensionMismatchError(
                f"system_dim {system_dim} does not match hamiltonian "
                f"dimension {dim}"
            )
    identity = np.eye(dim, dtype=complex)
    total = np.zeros((dim * dim, dim * dim), dtype=complex)
    if hamiltonian is not None:
        total += -1j * (
            np.kron(hamiltonian, identity) - np.kron(identity, hamiltonian.T)
        )
    for rate, operator in jumps:
        op = np.asarray(operator, dtype=complex)
        if op.shape != (dim, dim):
            raise DimensionMismatchError(
                f"jump operator shape {op.shape} does not match dimension {dim}"
            )
        gram = op.conj().T @ op
        total += rate * (
            np.kron(op, op.conj())
            - 0.5 * (np.kron(gram, identity) + np.kron(identity, gram.T))
        )
    return Superoperator(total, dim)


def lindblad_form_superop(
    hamiltonian: "HamiltonianCoefficients | np.ndarray | None",
    dissipator: "DissipatorMatrix",
) -> Superoperator:
    """Assemble the superoperator of a GKLS-basis form ``(H, [a_jk])``.

        S = -i (H x I - I x H^T)
            + sum_jk a_jk (F_j x conj(F_k)
                           - (1/2) (F_k F_j x I + I x (F_k F_j)^T))

    where the ``F`` are normalized Pauli strings (Hermitian, so
    ``F_k^dag = F_k``). The double sum runs over the dissipator's index
    set; the two-sided part and the anticommutator part are assembled
    through fast Pauli transforms rather than dense Kronecker sums.

    :param hamiltonian: extracted coefficients, a dense Hermitian matrix,
        or None for a purely dissipative generator.
    :param dissipator: the coefficient matrix ``[a_jk]``.
    """
    num_sites = dissipator.num_sites
    dim = 2**num_sites
    codes = np.array([index.code for index in dissipator.index_set], dtype=np.int64)
    entries = dissipator.entries

    # Two-sided part: sum_jk a_jk F_j x conj(F_k). In the doubled-space
    # Pauli basis the coefficient of F_j x F_k is a_jk * (-1)^(#2s in k)
    # because conj(F_k) = (-1)^(#2s) F_k.
    two_counts = code_two_counts(num_sites)
    doubled = np.zeros(4 ** (2 * num_sites), dtype=complex)
    signs = (-1.0) ** two_counts[codes]
    doubled_codes = (codes[:, None] << (2 * num_sites)) + codes[None, :]
    np.add.at(
        doubled,
        doubled_codes.reshape(-1),
        (entries * signs[None, :]).reshape(-1),
    )
    two_sided = matrix_from_pauli_coefficients(doubled, 2 * num_sites)

    # Anticommutator part: K = sum_jk a_jk F_k F_j expanded in the Pauli
    # basis through the single-site product tables, then
    # -(1/2) (K x I + I x K^T).
    k_coeffs = quadratic_product_coefficients(codes, entries, num_sites)
    k_matrix = matrix_from_pauli_coefficients(k_coeffs, num_sites)
    identity = np.eye(dim, dtype=complex)
    anticommutator = -0.5 * (
        np.kron(k_matrix, identity) + np.kron(identity, k_matrix.T)
    )

    total = two_sided + anticommutator
    if hamiltonian is not None:
        if isinstance(hamiltonian, np.ndarray):
            h_matrix = np.asarray(hamiltonian, dtype=complex)
        else:
            h_matrix = hamiltonian.to_matrix()
        if h_matrix.shape != (dim, dim):
            raise DimensionMismatchError(
                f"hamiltonian shape {h_matrix.shape} does not match "
                f"dimension {dim}"
            )
        total += -1j * (
            np.kron(h_matrix, identity) - np.kron(identity, h_matrix.T)
        )
    return Superoperator(total, dim)


def apply_superop(superop: Superoperator, rho: np.ndarray) -> np.ndarray:
    """Apply a superoperator to a density matrix."""
    arr = np.asarray(rho, dtype=complex)
    if arr.shape != (superop.system_dim, superop.system_dim):
        raise DimensionMismatchError(
            f"state shape {arr.shape} does not match system dimension "
            f"{superop.system_dim}"
        )
    return devectorize(superop.matrix @ vectorize(arr))


def is_trace_preserving(superop: Superoperator, tol: float = 1e-10) -> bool:
    """Whether ``Tr[S rho] = 0`` for all states: the vectorized identity
    must annihilate the superoperator from the left, relative to its scale."""
    identity_vec = vectorize(np.eye(superop.system_dim, dtype=complex))
    residual = float(np.linalg.norm(identity_vec.conj() @ superop.matrix))
    scale = max(1.0, float(np.max(np.abs(superop.matrix))))
    return residual <= tol * scale


def is_hermiticity_preserving(
    superop: Superoperator,
    tol: float = 1e-8,
    num_samples: int = 4,
    seed: int = 7,
) -> bool:
    """Whether the superoperator maps Hermitian matrices to Hermitian
    matrices, probed on random Hermitian inputs.

    Sampling is deterministic (fixed seed) so repeated calls agree.
    """
    rng = np.random.default_rng(seed)
    dim = superop.system_dim
    scale = max(1.0, float(np.max(np.abs(superop.matrix))))
    for _ in range(num_samples):
        raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        hermitian = 0.5 * (raw + raw.conj().T)
        image = apply_superop(superop, hermitian)
        defect = float(np.max(np.abs(image - image.conj().T)))
        if defect > tol * scale:
            return False
    return True
