"""Phase-consistent singular value and Schmidt decompositions."""

from .errors import (
    ConvergenceError,
    ConventionError,
    DimensionError,
    NonFiniteError,
    NotHermitianError,
    ParseError,
    PhaseSolveError,
    PhaseSvdError,
)
from .linalg_core import EigenDecomposition, adjoint, frobenius_norm, hermitian_eigendecompose, mat_mul
from .phase_svd import (
    ALL_IN_U,
    ALL_IN_V,
    HALF_HALF,
    PhaseConvention,
    SvdFactorization,
    build_unitaries_step1,
    custom_alphas,
    factor_phases,
    rank_one_terms,
    reconstruct,
    solve_diagonal_step2,
    svd,
)
from .schmidt import (
    BipartiteState,
    SchmidtDecomposition,
    amplitudes_to_matrix,
    local_phase_rotations,
    reconstruct_state,
    schmidt_decompose,
)

__version__ = "0.1.0"
