"""Effective-generator expansions of periodically driven Lindblad
dynamics.

The package builds vectorized GKLS superoperators for piecewise-constant
periodic drives on up to six spin-1/2 sites, computes stroboscopic and
kick-free high-frequency expansions of the one-period effective
generator, extracts the canonical (Hamiltonian, coefficient-matrix)
decomposition over the normalized Pauli basis, certifies whether each
truncation is a valid Lindblad generator, verifies the structural
theorems obeyed by the coefficient matrices (sparsity, block structure,
triangular negativity, growth bounds), and probes the resulting
dynamics (stroboscopic accuracy, complete positivity, stationary
states, unraveling feasibility).
"""

from .core import (
    HERMITICITY_RTOL,
    devectorize,
    frobenius_inner,
    herm_eigs,
    hermiticity_defect,
    kron,
    matrix_exp,
    matrix_log_principal,
    vectorize,
)
from .dynamics import (
    StationaryReport,
    StroboscopicComparison,
    TrajectoryFeasibility,
    choi_matrix,
    choi_min_eig,
    choi_min_eig_series,
    cp_grid_times,
    ness_report,
    random_density_matrix,
    stroboscopic_compare,
    trace_distance,
    trajectory_feasibility,
)
from .errors import (
    BranchCutError,
    ConditioningError,
    ConfigError,
    DecompositionInconsistencyError,
    DimensionMismatchError,
    FloquetLindbladError,
    HermiticityError,
    InvalidIndexError,
    NoReferenceError,
    NotLindbladCandidateError,
    StructureViolationError,
    SupportsUndeclaredError,
    UnsupportedOrderError,
)
from .lindblad import (
    MAX_NUM_SITES,
    HamiltonianTerm,
    JumpTerm,
    LindbladSegment,
    PiecewiseLiouvillian,
    Superoperator,
    apply_superop,
    is_hermiticity_preserving,
    is_trace_preserving,
    lindblad_form_superop,
    liouvillian_superop,
)
from .liouvillianity import (
    DissipatorMatrix,
    HamiltonianCoefficients,
    LiouvillianityReport,
    PerOrderCheck,
    SignedChannel,
    SignedLindbladForm,
    canonical_decomposition,
    extract_dissipator,
    extract_hamiltonian,
    per_order_checks,
    psd_report,
    roundtrip_residual,
)
from .locality import (
    Block,
    BlockStructure,
    CoefficientBoundCheck,
    SparsityReport,
    TriangularSplit,
    block_partition,
    coefficient_bound,
    coefficient_bound_check,
    d_n_bound,
    drive_locality,
    extensiveness,
    max_weight_bound,
    sparsity_check,
    triangular_split,
    triangular_threshold,
)
from .magnus import (
    DEFAULT_M_MAX,
    FLAVOR_STROBOSCOPIC,
    FLAVOR_VAN_VLECK,
    EffectiveExpansion,
    bch_orders,
    exact_effective,
    floquet_propagator,
    fm_general,
    fourier_component,
    van_vleck_orders,
)
from .models import (
    ModelParams,
    ReferenceBlock,
    ReferenceResult,
    analytic_reference,
    build_model,
)
from .pauli import (
    PAULI,
    FrobeniusBasis,
    MultiIndex,
    embed_local,
    matrix_from_pauli_coefficients,
    pauli_coefficients,
    pauli_string,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "HERMITICITY_RTOL",
    "vectorize",
    "devectorize",
    "frobenius_inner",
    "kron",
    "hermiticity_defect",
    "herm_eigs",
    "matrix_exp",
    "matrix_log_principal",
    # errors
    "FloquetLindbladError",
    "DimensionMismatchError",
    "InvalidIndexError",
    "HermiticityError",
    "BranchCutError",
    "ConditioningError",
    "NotLindbladCandidateError",
    "DecompositionInconsistencyError",
    "StructureViolationError",
    "UnsupportedOrderError",
    "SupportsUndeclaredError",
    "NoReferenceError",
    "ConfigError",
    # pauli
    "PAULI",
    "MultiIndex",
    "FrobeniusBasis",
    "pauli_string",
    "pauli_coefficients",
    "matrix_from_pauli_coefficients",
    "embed_local",
    # lindblad
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
    # magnus
    "DEFAULT_M_MAX",
    "FLAVOR_STROBOSCOPIC",
    "FLAVOR_VAN_VLECK",
    "EffectiveExpansion",
    "bch_orders",
    "fm_general",
    "fourier_component",
    "van_vleck_orders",
    "floquet_propagator",
    "exact_effective",
    # liouvillianity
    "DissipatorMatrix",
    "HamiltonianCoefficients",
    "LiouvillianityReport",
    "PerOrderCheck",
    "SignedChannel",
    "SignedLindbladForm",
    "extract_dissipator",
    "extract_hamiltonian",
    "psd_report",
    "canonical_decomposition",
    "per_order_checks",
    "roundtrip_residual",
    # locality
    "max_weight_bound",
    "triangular_threshold",
    "d_n_bound",
    "SparsityReport",
    "sparsity_check",
    "Block",
    "BlockStructure",
    "block_partition",
    "TriangularSplit",
    "triangular_split",
    "coefficient_bound",
    "CoefficientBoundCheck",
    "coefficient_bound_check",
    "drive_locality",
    "extensiveness",
    # models
    "ModelParams",
    "ReferenceBlock",
    "ReferenceResult",
    "build_model",
    "analytic_reference",
    # dynamics
    "trace_distance",
    "random_density_matrix",
    "StroboscopicComparison",
    "stroboscopic_compare",
    "choi_matrix",
    "choi_min_eig",
    "cp_grid_times",
    "choi_min_eig_series",
    "StationaryReport",
    "ness_report",
    "TrajectoryFeasibility",
    "trajectory_feasibility",
]
