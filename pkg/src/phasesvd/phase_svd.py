"""Phase-consistent SVD.

Eigenvectors of ``A A^dagger`` and ``A^dagger A`` fix the singular vectors
only up to unit phases, so multiplying them back together does not in
general return ``A``. The routine here fixes the phases explicitly:

1. take ``U0`` and ``V0`` straight from the two eigendecompositions,
2. read off the complex diagonal ``d_j = <u_j|A|v_j>`` so that
   ``U0 diag(d) V0^dagger = A``, with ``sigma_j = |d_j|``,
3. split each ``d_j / |d_j|`` into a left phase and a right phase and fold
   them into the columns of ``U0`` and ``V0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConventionError, PhaseSolveError
from .linalg_core import (
    DEFAULT_TOL,
    as_matrix,
    canonicalize_phase,
    frobenius_norm,
    frozen,
    gram_schmidt,
    hermitian_eigendecompose,
)

RANK_TOL = 1e-12
# relative reconstruction residual accepted from Step-2 and by `verify`
ACCEPT_TOL = 1e-9
# singular values closer than this (relative) are paired up as one block
CLUSTER_RTOL = 1e-6


@dataclass(frozen=True)
class PhaseConvention:
    """How ``d_j/|d_j| = e^{i alpha_j} e^{i beta_j}`` is split between U and V.

    ``kind`` is one of ``"AllInU"``, ``"AllInV"``, ``"HalfHalf"`` or
    ``"CustomAlphas"``; only the last uses ``alphas``.
    """

    kind: str
    alphas: tuple[float, ...] = field(default=())

    KINDS = ("AllInU", "AllInV", "HalfHalf", "CustomAlphas")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConventionError(f"unknown phase convention {self.kind!r}")
        if self.kind != "CustomAlphas" and self.alphas:
            raise ConventionError(f"{self.kind} takes no angles")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not all(math.isfinite(a) for a in self.alphas):
            raise ConventionError("angles must be finite")

    def __str__(self):
        if self.kind == "CustomAlphas":
            return "CustomAlphas(" + ", ".join(repr(a) for a in self.alphas) + ")"
        return self.kind


ALL_IN_U = PhaseConvention("AllInU")
ALL_IN_V = PhaseConvention("AllInV")
HALF_HALF = PhaseConvention("HalfHalf")
NAMED_CONVENTIONS = (ALL_IN_U, ALL_IN_V, HALF_HALF)


def custom_alphas(alphas: Sequence[float]) -> PhaseConvention:
    return PhaseConvention("CustomAlphas", tuple(alphas))


@dataclass(frozen=True)
class SvdFactorization:
    """``A = U diag_mxn(sigma) V^dagger`` plus the phase bookkeeping.

    ``phase_u[j]`` is ``e^{i alpha_j}`` (the j-th entry of the left phase
    matrix) and ``phase_v[j]`` is ``e^{-i beta_j}``, so that
    ``phase_u[j] * conj(phase_v[j]) * sigma[j] == d[j]``.
    """

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    d: np.ndarray
    phase_u: np.ndarray
    phase_v: np.ndarray
    convention: PhaseConvention
    residual: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.d))

    def sigma_matrix(self) -> np.ndarray:
        m, n = self.shape
        dm = np.zeros((m, n), dtype=np.complex128)
        k = len(self.sigma)
        dm[np.arange(k), np.arange(k)] = self.sigma
        return dm

    def phase_free_unitaries(self) -> tuple[np.ndarray, np.ndarray]:
        """``U0, V0``: U and V with the phase factors divided back out."""
        k = len(self.sigma)
        u0 = self.U.copy()
        v0 = self.V.copy()
        u0[:, :k] = u0[:, :k] / self.phase_u
        v0[:, :k] = v0[:, :k] / self.phase_v
        return u0, v0


class Step1(NamedTuple):
    U0: np.ndarray
    V0: np.ndarray
    sigma_sq: np.ndarray


class Step2(NamedTuple):
    d: np.ndarray
    U0_adj: np.ndarray
    V0_adj: np.ndarray


class Phases(NamedTuple):
    phase_u: np.ndarray
    sigma: np.ndarray
    phase_v: np.ndarray


def _hermitian_part(h: np.ndarray) -> np.ndarray:
    return (h + h.conj().T) / 2


def build_unitaries_step1(a, tol: float = DEFAULT_TOL) -> Step1:
    """Eigenvectors of ``A A^dagger`` (columns of U0) and ``A^dagger A`` (V0).

    Both come back ordered by nonincreasing eigenvalue and with canonical
    phases. ``sigma_sq`` holds the leading ``min(m, n)`` eigenvalues of
    ``A^dagger A``, clamped at zero.
    """
    a = as_matrix(a, name="A")
    m, n = a.shape
    # power-of-two rescaling is exact and keeps A A^dagger clear of under/overflow
    _, exp = math.frexp(float(np.abs(a).max()))
    scaled = np.ldexp(a.real, -exp) + 1j * np.ldexp(a.imag, -exp)
    u0 = hermitian_eigendecompose(_hermitian_part(scaled @ scaled.conj().T), tol).eigenvectors
    v0 = hermitian_eigendecompose(_hermitian_part(scaled.conj().T @ scaled), tol).eigenvectors
    u0, _ = _refine(u0, u0.conj().T @ scaled, tol)
    v0, w = _refine(v0, (scaled @ v0).conj().T, tol)
    k = min(m, n)
    sigma_sq = np.ldexp(np.clip(w[:k], 0.0, None), 2 * exp)
    return Step1(u0, v0, frozen(sigma_sq))


def _refine(q: np.ndarray, g: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """One more Jacobi pass on ``Q^dagger (A A^dagger) Q = G G^dagger``.

    The first pass resolves eigenvectors only to ``eps * ||A||^2`` in
    absolute terms, which mixes those of small, nearby eigenvalues. The
    rotated Gram matrix is nearly diagonal, so the relative criterion can
    separate them.
    """
    w, r = hermitian_eigendecompose(_hermitian_part(g @ g.conj().T), tol, relative=True)
    q = q @ r
    for j in range(q.shape[1]):
        q[:, j] = canonicalize_phase(q[:, j])
    return frozen(q), w


def _clusters(est: np.ndarray, rtol: float):
    """Runs of neighbouring estimates within ``rtol`` of each other (relative)."""
    start = 0
    for j in range(1, len(est) + 1):
        if j == len(est) or abs(est[j - 1] - est[j]) >= rtol * max(est[j - 1], est[j]):
            if j - start > 1:
                yield start, j
            start = j


def solve_diagonal_step2(
    a,
    u0,
    v0,
    tol: float = DEFAULT_TOL,
    *,
    rank_tol: float = RANK_TOL,
    cluster_rtol: float = CLUSTER_RTOL,
) -> Step2:
    """Complex diagonal ``d`` with ``U0_adj diag(d) V0_adj^dagger = A``.

    ``d_j = <u_j|A|v_j>``. The singular value behind each entry is estimated
    as the norm of column j of ``C = U0^dagger A V0``; entries whose estimate
    falls below ``rank_tol`` times the largest are set to exactly zero.

    Nonzero entries whose estimates agree to within ``cluster_rtol`` are
    resolved together, since independently computed eigenvectors of
    ``A A^dagger`` and ``A^dagger A`` need not pair up inside such a cluster.
    With ``B`` the cluster's block of ``C`` and ``B^dagger B = Y S^2 Y^dagger``,
    the U0 columns absorb ``B Y S^-1``, the V0 columns absorb ``Y`` and the
    entries of ``d`` become ``S``. For exactly repeated singular values
    ``B = s W`` with W unitary, ``Y`` is the identity and only U0 changes.
    Outside clusters ``U0_adj = U0`` and ``V0_adj = V0``.

    Raises PhaseSolveError if the reconstruction residual exceeds
    ``ACCEPT_TOL * max(1, ||A||_F)``, which means U0 and V0 are not paired
    eigenvector sets of the same matrix.
    """
    a = as_matrix(a, name="A")
    u0 = np.array(as_matrix(u0, name="U0"))
    v0 = np.array(as_matrix(v0, name="V0"))
    m, n = a.shape
    if u0.shape != (m, m) or v0.shape != (n, n):
        raise PhaseSolveError(f"U0 {u0.shape} / V0 {v0.shape} do not fit A {a.shape}")
    k = min(m, n)
    core = u0[:, :k].conj().T @ a @ v0[:, :k]
    d = core.diagonal().copy()
    # column norms estimate sigma_j however U0 and V0 pair up
    est = np.linalg.norm(core, axis=0)
    top = float(est.max())

    if top > 0.0:
        d[est < rank_tol * top] = 0.0
        nz = int(np.count_nonzero(est >= rank_tol * top))
        for lo, hi in _clusters(est[:nz], cluster_rtol):
            block = core[lo:hi, lo:hi]
            w, y = hermitian_eigendecompose(_hermitian_part(block.conj().T @ block), tol, relative=True)
            if w[0] - w[-1] <= tol * w[0]:
                # exactly repeated: B = s W, absorb W into U alone
                y = np.eye(hi - lo)
                w = np.full(hi - lo, np.mean(w))
            sig = np.sqrt(np.clip(w, 0.0, None))
            if sig[-1] < rank_tol * top:
                raise PhaseSolveError(f"cluster {lo}:{hi} is rank deficient")
            x = gram_schmidt((block @ y) / sig)
            u0[:, lo:hi] = u0[:, lo:hi] @ x
            v0[:, lo:hi] = v0[:, lo:hi] @ y
            d[lo:hi] = sig
    else:
        d[:] = 0.0

    recon = (u0[:, :k] * d) @ v0[:, :k].conj().T
    scale = max(1.0, frobenius_norm(a))
    residual = frobenius_norm(recon - a)
    if residual > ACCEPT_TOL * scale:
        raise PhaseSolveError(f"U0 diag(d) V0^dagger misses A by {residual:.3e}")
    return Step2(frozen(d), frozen(u0), frozen(v0))


def factor_phases(d, convention: PhaseConvention = ALL_IN_U) -> Phases:
    """Split ``d_j = sigma_j e^{i(alpha_j + beta_j)}`` per ``convention``.

    Returns ``(phase_u, sigma, phase_v)`` with ``phase_u[j] = e^{i alpha_j}``
    and ``phase_v[j] = e^{-i beta_j}``. Zero entries get unit phases.
    """
    d = np.asarray(d, dtype=np.complex128)
    sigma = np.abs(d)
    nonzero = sigma > 0
    unit = np.ones_like(d)
    # exact power-of-two rescale of each d_j first: for subnormal d_j both
    # d / |d| and |d| itself lose accuracy
    dn = d[nonzero]
    _, exp = np.frexp(np.maximum(np.abs(dn.real), np.abs(dn.imag)))
    scaled = np.ldexp(dn.real, -exp) + 1j * np.ldexp(dn.imag, -exp)
    unit[nonzero] = scaled / np.abs(scaled)
    phase_u = np.ones_like(d)
    phase_v = np.ones_like(d)

    if convention.kind == "AllInU":
        phase_u = unit
    elif convention.kind == "AllInV":
        phase_v = unit.conj()
    elif convention.kind == "HalfHalf":
        half = np.exp(0.5j * np.angle(unit))
        phase_u = half
        phase_v = half.conj()
    else:
        rank = int(np.count_nonzero(nonzero))
        if len(convention.alphas) != rank:
            raise ConventionError(
                f"CustomAlphas needs {rank} angles (one per nonzero singular value), got {len(convention.alphas)}"
            )
        for j, alpha in zip(np.flatnonzero(nonzero), convention.alphas):
            beta = cmath.phase(unit[j]) - alpha
            phase_u[j] = cmath.exp(1j * alpha)
            phase_v[j] = cmath.exp(-1j * beta)
    return Phases(frozen(phase_u), frozen(sigma), frozen(phase_v))


def reconstruct(f: SvdFactorization) -> np.ndarray:
    """``U diag_mxn(sigma) V^dagger``."""
    k = len(f.sigma)
    return frozen((f.U[:, :k] * f.sigma) @ f.V[:, :k].conj().T)


def rank_one_terms(f: SvdFactorization) -> list[np.ndarray]:
    """The phase-independent pieces ``d_j |u_j><v_j|``, one per nonzero d_j.

    Their sum is A, and each term is unchanged by any re-phasing of the
    eigenvectors that Step-2 is fed.
    """
    u0, v0 = f.phase_free_unitaries()
    return [frozen(f.d[j] * np.outer(u0[:, j], v0[:, j].conj())) for j in range(len(f.d)) if f.d[j] != 0]


def _sort_by_modulus(u0, v0, d):
    order = np.argsort(-np.abs(d), kind="stable")
    if np.all(order == np.arange(len(d))):
        return u0, v0, d
    k = len(d)
    u0 = u0.copy()
    v0 = v0.copy()
    u0[:, :k] = u0[:, order]
    v0[:, :k] = v0[:, order]
    return u0, v0, d[order]


def svd_from_unitaries(
    a,
    u0,
    v0,
    convention: PhaseConvention = ALL_IN_U,
    tol: float = DEFAULT_TOL,
    *,
    rank_tol: float = RANK_TOL,
) -> SvdFactorization:
    """Steps 2 and 3 for caller-supplied phase-free unitaries."""
    a = as_matrix(a, name="A")
    d, u0, v0 = solve_diagonal_step2(a, u0, v0, tol, rank_tol=rank_tol)
    u0, v0, d = _sort_by_modulus(u0, v0, d)
    phase_u, sigma, phase_v = factor_phases(d, convention)
    k = len(d)
    u = np.array(u0)
    v = np.array(v0)
    u[:, :k] *= phase_u
    v[:, :k] *= phase_v
    residual = frobenius_norm((u[:, :k] * sigma) @ v[:, :k].conj().T - a)
    return SvdFactorization(
        U=frozen(u),
        sigma=sigma,
        V=frozen(v),
        d=frozen(np.array(d)),
        phase_u=phase_u,
        phase_v=phase_v,
        convention=convention,
        residual=residual,
    )


def svd(
    a,
    convention: PhaseConvention = ALL_IN_U,
    tol: float = DEFAULT_TOL,
    *,
    rank_tol: float = RANK_TOL,
) -> SvdFactorization:
    """Full phase-consistent SVD of a dense complex matrix.

    >>> f = svd([[1, 2], [2, 1]])
    >>> f.sigma.tolist(), f.d.real.round(12).tolist()
    ([3.0, 1.0], [3.0, -1.0])
    """
    a = as_matrix(a, name="A")
    m, n = a.shape
    if not np.any(a):
        k = min(m, n)
        ones = frozen(np.ones(k, dtype=np.complex128))
        return SvdFactorization(
            U=frozen(np.eye(m, dtype=np.complex128)),
            sigma=frozen(np.zeros(k)),
            V=frozen(np.eye(n, dtype=np.complex128)),
            d=frozen(np.zeros(k, dtype=np.complex128)),
            phase_u=ones,
            phase_v=ones,
            convention=convention,
            residual=0.0,
        )
    u0, v0, _ = build_unitaries_step1(a, tol)
    return svd_from_unitaries(a, u0, v0, convention, tol, rank_tol=rank_tol)
