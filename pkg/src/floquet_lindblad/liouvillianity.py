"""Dissipator extraction and Liouvillianity certification.

Any trace- and Hermiticity-preserving superoperator ``S`` on ``L`` sites
decomposes uniquely as

    S rho = -i [H, rho]
            + sum_{j,k != 0} a_jk (F_j rho F_k
                                   - (1/2) {F_k F_j, rho})

over the normalized Pauli basis, with ``H`` Hermitian traceless and
``[a_jk]`` a Hermitian coefficient matrix. ``S`` generates a completely
positive flow exactly when ``[a_jk]`` is positive semidefinite; the
magnitude of its most negative eigenvalue is the breaking degree.

Extraction identities (row-major vectorization, ``d = 2^L``):

* ``a_jk = (-1)^(#2s in k) * c[(j, k)]`` where ``c`` are the Pauli
  coefficients of ``S`` viewed as an operator on the doubled (2L-site)
  space and ``(j, k)`` is the concatenated multi-index;
* ``h_j = i ( c[(j, 0)] / sqrt(d) + (1/2) <F_j, K> )`` with
  ``K = sum_jk a_jk F_k F_j``.

When the expansion order ``n`` and drive locality ``k`` are known, the
locality theory guarantees ``a_jk = 0`` for ``n_j + n_k > (n+1)k - n``;
``weight_limit`` prunes the index set accordingly and zeroes entries
beyond the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import herm_eigs
from .errors import (
    DecompositionInconsistencyError,
    DimensionMismatchError,
    HermiticityError,
    NotLindbladCandidateError,
)
from .lindblad import (
    Superoperator,
    is_hermiticity_preserving,
    is_trace_preserving,
    lindblad_form_superop,
)
from .magnus import EffectiveExpansion
from .pauli import (
    MultiIndex,
    code_two_counts,
    code_weights,
    matrix_from_pauli_coefficients,
    pauli_coefficients,
    quadratic_product_coefficients,
)

__all__ = [
    "DissipatorMatrix",
    "HamiltonianCoefficients",
    "LiouvillianityReport",
    "SignedChannel",
    "SignedLindbladForm",
    "extract_dissipator",
    "extract_hamiltonian",
    "psd_report",
    "canonical_decomposition",
    "per_order_checks",
    "roundtrip_residual",
]

#: Validation tolerance for the structural prerequisites.
VALIDATION_TOL = 1e-8

#: Relative PSD tolerance entering the default Liouvillianity verdict.
PSD_RTOL = 1e-9

#: Relative magnitude below which canonical channels are dropped.
CHANNEL_DROP_RTOL = 1e-12


def _sites_from_superop(superop: Superoperator) -> int:
    num_sites = int(round(np.log2(superop.system_dim)))
    if 2**num_sites != superop.system_dim:
        raise DimensionMismatchError(
            f"system dimension {superop.system_dim} is not a power of two"
        )
    return num_sites


@dataclass(frozen=True)
class DissipatorMatrix:
    """Hermitian coefficient matrix ``[a_jk]`` over a retained index set.

    ``entries[p, q]`` couples ``index_set[p]`` to ``index_set[q]``.
    ``weight_limit`` records the pair-weight cap used during extraction
    (None for a full extraction).
    """

    index_set: tuple[MultiIndex, ...]
    entries: np.ndarray
    num_sites: int
    weight_limit: int | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=complex)
        count = len(self.index_set)
        if arr.shape != (count, count):
            raise DimensionMismatchError(
                f"entries shape {arr.shape} does not match index set size "
                f"{count}"
            )
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "index_set", tuple(self.index_set))

    @property
    def size(self) -> int:
        return len(self.index_set)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.size else 0.0

    def position(self, index: MultiIndex) -> int:
        """Row position of a multi-index within the index set."""
        try:
            return self._positions[index]
        except AttributeError:
            positions = {idx: p for p, idx in enumerate(self.index_set)}
            object.__setattr__(self, "_positions", positions)
            return positions[index]

    def entry(self, row: MultiIndex, col: MultiIndex) -> complex:
        """Coefficient ``a_jk`` for a pair of multi-indices."""
        return complex(self.entries[self.position(row), self.position(col)])

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries))) if self.size else 0.0


@dataclass(frozen=True)
class HamiltonianCoefficients:
    """Real coefficients ``h_j`` of the coherent part over weight >= 1
    indices: ``H = sum_j h_j F_j``."""

    index_set: tuple[MultiIndex, ...]
    values: np.ndarray
    num_sites: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (len(self.index_set),):
            raise DimensionMismatchError(
                f"values shape {arr.shape} does not match index set size "
                f"{len(self.index_set)}"
            )
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "index_set", tuple(self.index_set))

    def coefficient(self, index: MultiIndex) -> float:
        for position, candidate in enumerate(self.index_set):
            if candidate == index:
                return float(self.values[position])
        raise DimensionMismatchError(f"index {index} not in index set")

    def to_matrix(self) -> np.ndarray:
        """Dense Hermitian matrix ``sum_j h_j F_j``."""
        coeffs = np.zeros(4**self.num_sites, dtype=complex)
        for index, value in zip(self.index_set, self.values):
            coeffs[index.code] = value
        return matrix_from_pauli_coefficients(coeffs, self.num_sites)


@dataclass(frozen=True)
class LiouvillianityReport:
    """PSD verdict for a dissipator matrix.

    ``breaking_degree`` is zero when the verdict is positive and the
    magnitude of the most negative eigenvalue otherwise, so
    ``breaking_degree == 0`` exactly matches ``is_liouvillian``.
    """

    eigenvalues: np.ndarray
    min_eigenvalue: float
    tol: float
    is_liouvillian: bool
    breaking_degree: float


@dataclass(frozen=True)
class SignedChannel:
    """One canonical channel: a scaled jump operator and its sign."""

    sign: int
    operator: np.ndarray
    magnitude: float


@dataclass(frozen=True)
class SignedLindbladForm:
    """Canonical signed form: Hermitian part plus signed channels.

    The generator it represents is

        S rho = -i [H, rho]
                + sum_i s_i (A_i rho A_i^dag
                             - (1/2) {A_i^dag A_i, rho})

    with ``s_i`` in ``{+1, -1}`` and ``A_i`` the (already scaled)
    channel operators.
    """

    hamiltonian_matrix: np.ndarray | None
    channels: tuple[SignedChannel, ...]
    num_sites: int

    @property
    def negative_channels(self) -> tuple[SignedChannel, ...]:
        return tuple(c for c in self.channels if c.sign < 0)

    def to_superoperator(self) -> Superoperator:
        """Reassemble the dense superoperator of the signed form."""
        from .lindblad import liouvillian_superop

        jumps = [
            (float(channel.sign), channel.operator)
            for channel in self.channels
        ]
        return liouvillian_superop(
            self.hamiltonian_matrix, jumps, system_dim=2**self.num_sites
        )


def _validate_candidate(superop: Superoperator) -> None:
    if not is_trace_preserving(superop, tol=VALIDATION_TOL):
        raise NotLindbladCandidateError(
            "superoperator is not trace preserving within "
            f"{VALIDATION_TOL:g}"
        )
    if not is_hermiticity_preserving(superop, tol=VALIDATION_TOL):
        raise NotLindbladCandidateError(
            "superoperator is not Hermiticity preserving within "
            f"{VALIDATION_TOL:g}"
        )


def _doubled_coefficients(superop: Superoperator, num_sites: int) -> np.ndarray:
    coeffs = pauli_coefficients(superop.matrix, 2 * num_sites)
    return coeffs.reshape(4**num_sites, 4**num_sites)


def extract_dissipator(
    superop: Superoperator,
    weight_limit: int | None = None,
    validate: bool = True,
) -> DissipatorMatrix:
    """Extract the Hermitian coefficient matrix ``[a_jk]``.

    :param superop: the superoperator to decompose.
    :param weight_limit: optional pair-weight cap ``n_j + n_k``; retained
        indices then have weight in ``1..weight_limit-1`` and entries
        beyond the cap are set to exact zeros. None keeps every weight.
    :param validate: check trace and Hermiticity preservation first.
    :raises NotLindbladCandidateError: if validation fails.
    :raises HermiticityError: if the extracted matrix is not Hermitian
        within tolerance (signals a corrupted input).
    """
    num_sites = _sites_from_superop(superop)
    if validate:
        _validate_candidate(superop)
    table = _doubled_coefficients(superop, num_sites)
    signs = (-1.0) ** code_two_counts(num_sites)
    table = table * signs[None, :]

    weights = code_weights(num_sites)
    max_weight = num_sites if weight_limit is None else max(weight_limit - 1, 0)
    retained = np.nonzero((weights >= 1) & (weights <= max_weight))[0]
    entries = table[np.ix_(retained, retained)]
    if weight_limit is not None:
        pair_weights = weights[retained][:, None] + weights[retained][None, :]
        entries = np.where(pair_weights <= weight_limit, entries, 0.0)

    scale = float(np.max(np.abs(entries))) if entries.size else 0.0
    defect = float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0
    if defect > max(1e-10 * scale, 1e-12):
        raise HermiticityError(
            f"extracted coefficient matrix deviates from Hermiticity by "
            f"{defect:.3e}"
        )
    entries = 0.5 * (entries + entries.conj().T)
    index_set = tuple(
        MultiIndex.from_code(int(code), num_sites) for code in retained
    )
    return DissipatorMatrix(index_set, entries, num_sites, weight_limit)


def extract_hamiltonian(
    superop: Superoperator,
    dissipator: DissipatorMatrix | None = None,
    validate: bool = True,
) -> HamiltonianCoefficients:
    """Extract the coherent coefficients ``h_j`` of the decomposition.

    :param dissipator: pass a previously extracted matrix to reuse it;
        it must be a full (not weight-limited) extraction so the
        correction term is complete.
    :raises DecompositionInconsistencyError: if any coefficient has an
        imaginary residue beyond tolerance, signalling an input outside
        the decomposable class.
    """
    num_sites = _sites_from_superop(superop)
    if validate:
        _validate_candidate(superop)
    if dissipator is None:
        dissipator = extract_dissipator(superop, validate=False)
    elif dissipator.weight_limit is not None:
        raise DimensionMismatchError(
            "hamiltonian extraction needs a full dissipator matrix, "
            "got a weight-limited one"
        )
    table = _doubled_coefficients(superop, num_sites)
    codes = np.array([index.code for index in dissipator.index_set], dtype=np.int64)
    gram_coeffs = quadratic_product_coefficients(
        codes, dissipator.entries, num_sites
    )
    weights = code_weights(num_sites)
    retained = np.nonzero(weights >= 1)[0]
    dim = float(2**num_sites)
    raw = 1j * (
        table[retained, 0] / np.sqrt(dim) + 0.5 * gram_coeffs[retained]
    )
    scale = max(1.0, float(np.max(np.abs(raw))) if raw.size else 0.0)
    residue = float(np.max(np.abs(raw.imag))) if raw.size else 0.0
    if residue > VALIDATION_TOL * scale:
        raise DecompositionInconsistencyError(
            f"hamiltonian coefficients have imaginary residue {residue:.3e}"
        )
    index_set = tuple(
        MultiIndex.from_code(int(code), num_sites) for code in retained
    )
    return HamiltonianCoefficients(index_set, raw.real.copy(), num_sites)


def psd_report(
    dissipator: DissipatorMatrix, tol_psd: float | None = None
) -> LiouvillianityReport:
    """Certify positive semidefiniteness of a coefficient matrix.

    The default tolerance is ``1e-9 * max(1, max|a|)``; eigenvalues above
    ``-tol`` count as nonnegative.
    """
    if tol_psd is None:
        tol_psd = PSD_RTOL * max(1.0, dissipator.max_abs())
    eigenvalues, _ = herm_eigs(dissipator.entries)
    min_eig = float(eigenvalues[0]) if eigenvalues.size else 0.0
    is_liouvillian = min_eig >= -tol_psd
    breaking = 0.0 if is_liouvillian else -min_eig
    return LiouvillianityReport(
        eigenvalues=eigenvalues,
        min_eigenvalue=min_eig,
        tol=float(tol_psd),
        is_liouvillian=is_liouvillian,
        breaking_degree=breaking,
    )


def canonical_decomposition(
    dissipator: DissipatorMatrix,
    hamiltonian: HamiltonianCoefficients | None = None,
) -> SignedLindbladForm:
    """Diagonalize ``[a_jk]`` into signed canonical channels.

    Each eigenpair ``(lam, v)`` with ``|lam|`` above the drop threshold
    becomes one channel ``A = sqrt(|lam|) sum_p v_p F_p`` with sign
    ``sign(lam)``; eigenvalues within ``1e-12`` (relative) of zero are
    dropped.
    """
    scale = max(1.0, dissipator.max_abs())
    eigenvalues, eigenvectors = herm_eigs(dissipator.entries)
    channels = []
    for position in range(eigenvalues.size):
        lam = float(eigenvalues[position])
        if abs(lam) <= CHANNEL_DROP_RTOL * scale:
            continue
        coeffs = np.zeros(4**dissipator.num_sites, dtype=complex)
        for row, index in enumerate(dissipator.index_set):
            coeffs[index.code] = eigenvectors[row, position]
        operator = matrix_from_pauli_coefficients(
            coeffs, dissipator.num_sites
        ) * np.sqrt(abs(lam))
        channels.append(
            SignedChannel(
                sign=1 if lam > 0 else -1,
                operator=operator,
                magnitude=abs(lam),
            )
        )
    h_matrix = hamiltonian.to_matrix() if hamiltonian is not None else None
    return SignedLindbladForm(h_matrix, tuple(channels), dissipator.num_sites)


@dataclass(frozen=True)
class PerOrderCheck:
    """Structural record for one expansion order.

    ``trace_ok`` is None at order zero (where the trace is positive by
    construction) and otherwise states whether ``|Tr a|`` is below the
    absolute tolerance ``1e-9``. ``report`` is the PSD verdict of the
    order's own dissipator matrix.
    """

    order: int
    dissipator: DissipatorMatrix
    trace: float
    trace_ok: bool | None
    report: LiouvillianityReport


#: Absolute tolerance on per-order dissipator traces (orders >= 1).
TRACE_TOL = 1e-9


def per_order_checks(
    expansion: EffectiveExpansion, weight_limit: int | None = None
) -> tuple[PerOrderCheck, ...]:
    """Per-order structural checks of an expansion.

    For every computed order the order term's own dissipator matrix is
    extracted; orders one and above must have vanishing trace, and the
    order-zero matrix must be positive semidefinite (it is a convex
    average of instantaneous dissipators).
    """
    checks = []
    for order in range(expansion.max_order + 1):
        dissipator = extract_dissipator(
            expansion.term(order), weight_limit=weight_limit
        )
        trace = dissipator.trace()
        trace_ok = None if order == 0 else abs(trace) <= TRACE_TOL
        report = psd_report(dissipator)
        checks.append(
            PerOrderCheck(
                order=order,
                dissipator=dissipator,
                trace=trace,
                trace_ok=trace_ok,
                report=report,
            )
        )
    return tuple(checks)


def roundtrip_residual(
    superop: Superoperator,
    hamiltonian: HamiltonianCoefficients,
    dissipator: DissipatorMatrix,
) -> float:
    """Relative Frobenius residual between ``superop`` and the
    superoperator rebuilt from its ``(H, [a_jk])`` decomposition."""
    rebuilt = lindblad_form_superop(hamiltonian, dissipator)
    difference = float(np.linalg.norm(superop.matrix - rebuilt.matrix))
    return difference / max(1.0, float(np.linalg.norm(superop.matrix)))
