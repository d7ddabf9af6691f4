"""Schmidt decomposition of bipartite pure states.

The amplitudes ``a_jk`` of ``|psi> = sum_jk a_jk |j>|k>`` are reshaped to a
``dim_a x dim_b`` matrix and passed through the phase-consistent SVD. With
``(a_jk) = U D V^dagger`` the local bases are

    |i_A> = sum_j U_ji |j>          (column i of U)
    |i_B> = sum_k conj(V_ki) |k>    (conjugated column i of V)

so ``|psi> = sum_i sigma_i |i_A>|i_B>`` with no further conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConventionError, DimensionError, NonFiniteError
from .linalg_core import DEFAULT_TOL, frozen
from .phase_svd import ALL_IN_U, RANK_TOL, PhaseConvention, SvdFactorization, svd

UNIT_MODULUS_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteState:
    """Amplitudes of a pure state on ``C^dim_a (x) C^dim_b``, row-major in |jk>.

    Normalization is not enforced; see ``norm``.
    """

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if int(self.dim_a) < 1 or int(self.dim_b) < 1:
            raise DimensionError(f"dimensions must be positive, got ({self.dim_a}, {self.dim_b})")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.dim_a * self.dim_b:
            raise DimensionError(
                f"{amps.size} amplitudes do not fill a {self.dim_a}x{self.dim_b} system"
            )
        if not np.all(np.isfinite(amps)):
            raise NonFiniteError("state has non-finite amplitudes")
        object.__setattr__(self, "dim_a", int(self.dim_a))
        object.__setattr__(self, "dim_b", int(self.dim_b))
        object.__setattr__(self, "amplitudes", frozen(amps))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    basis_a: np.ndarray  # row i is |i_A> in computational coordinates
    basis_b: np.ndarray  # row i is |i_B>
    schmidt_rank: int
    entropy_bits: float

    @property
    def dims(self) -> tuple[int, int]:
        return self.basis_a.shape[1], self.basis_b.shape[1]


def amplitudes_to_matrix(psi: BipartiteState) -> np.ndarray:
    """Coefficient matrix with entry (j, k) equal to the amplitude of |jk>."""
    return frozen(psi.amplitudes.reshape(psi.dim_a, psi.dim_b).copy())


def entanglement_entropy(coefficients, rank_tol: float = RANK_TOL) -> float:
    """Entropy in bits of the normalized squared coefficients.

    Coefficients at or below ``rank_tol`` times the largest are ignored.
    """
    c = np.asarray(coefficients, dtype=float)
    if c.size == 0 or c.max() == 0.0:
        return 0.0
    c = c[c > rank_tol * c.max()]
    p = c**2 / np.sum(c**2)
    return float(max(0.0, -np.sum(p * np.log2(p))))


def _schmidt_rank(coefficients, rank_tol: float) -> int:
    c = np.asarray(coefficients, dtype=float)
    if c.size == 0 or c.max() == 0.0:
        return 0
    return int(np.count_nonzero(c > rank_tol * c.max()))


def from_factorization(f: SvdFactorization, rank_tol: float = RANK_TOL) -> SchmidtDecomposition:
    """Read the Schmidt data off an SVD of the coefficient matrix."""
    k = len(f.sigma)
    basis_a = f.U[:, :k].T.copy()
    basis_b = f.V[:, :k].T.conj()
    return SchmidtDecomposition(
        coefficients=f.sigma,
        basis_a=frozen(basis_a),
        basis_b=frozen(basis_b),
        schmidt_rank=_schmidt_rank(f.sigma, rank_tol),
        entropy_bits=entanglement_entropy(f.sigma, rank_tol),
    )


def schmidt_decompose(
    psi: BipartiteState,
    convention: PhaseConvention = ALL_IN_U,
    tol: float = DEFAULT_TOL,
    *,
    rank_tol: float = RANK_TOL,
) -> SchmidtDecomposition:
    f = svd(amplitudes_to_matrix(psi), convention, tol, rank_tol=rank_tol)
    return from_factorization(f, rank_tol)


def reconstruct_state(sd: SchmidtDecomposition) -> np.ndarray:
    """Row-major amplitudes of ``sum_i c_i |i_A>|i_B>``."""
    mat = (sd.basis_a.T * sd.coefficients) @ sd.basis_b
    return frozen(mat.reshape(-1))


def _padded_phases(phases, k: int, rank: int, name: str) -> np.ndarray:
    p = np.asarray(phases, dtype=np.complex128).reshape(-1)
    if not rank <= p.size <= k:
        raise ConventionError(f"{name} has {p.size} entries, expected between {rank} and {k}")
    if np.any(np.abs(np.abs(p) - 1.0) > UNIT_MODULUS_TOL):
        raise ConventionError(f"{name} entries must have unit modulus")
    return np.concatenate([p, np.ones(k - p.size, dtype=np.complex128)])


def local_phase_rotations(
    sd: SchmidtDecomposition,
    phase_u: Sequence[complex],
    phase_v: Sequence[complex],
) -> SchmidtDecomposition:
    """Apply diagonal phase gates to each subsystem's Schmidt vectors.

    ``|i_A>`` picks up ``phase_u[i]`` and ``|i_B>`` picks up
    ``conj(phase_v[i])``, i.e. the same factors that Step-3 of the SVD folds
    into column i of U and V. Each gate acts on one subsystem only. The state
    is unchanged exactly when every ``phase_u[i] * conj(phase_v[i])`` is 1;
    otherwise term i is multiplied by that product.

    Phase sequences may be shorter than the number of coefficients (but
    not shorter than the Schmidt rank); missing entries are taken as 1.
    """
    k = len(sd.coefficients)
    pu = _padded_phases(phase_u, k, sd.schmidt_rank, "phase_u")
    pv = _padded_phases(phase_v, k, sd.schmidt_rank, "phase_v")
    return SchmidtDecomposition(
        coefficients=sd.coefficients,
        basis_a=frozen(sd.basis_a * pu[:, None]),
        basis_b=frozen(sd.basis_b * pv.conj()[:, None]),
        schmidt_rank=sd.schmidt_rank,
        entropy_bits=sd.entropy_bits,
    )


def max_entropy_bits(dim_a: int, dim_b: int) -> float:
    return math.log2(min(dim_a, dim_b))
