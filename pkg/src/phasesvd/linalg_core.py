"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every public
entry point funnels its operands through :func:`as_matrix`, which rejects
non-finite entries and returns a read-only copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NonFiniteError, NotHermitianError

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 60
# components whose modulus is this close to the maximum count as tied
PHASE_TIE_TOL = 1e-12
_TINY = float(np.finfo(np.float64).tiny)


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(m, *, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a read-only 2-D complex128 array.

    Raises DimensionError for non 2-D input or empty dimensions and
    NonFiniteError when any entry is NaN or infinite.
    """
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must have positive dimensions, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return frozen(a)


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    a = as_matrix(m)
    return frozen(a.conj().T.copy())


def mat_mul(left, right) -> np.ndarray:
    a = as_matrix(left, name="left")
    b = as_matrix(right, name="right")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return frozen(a @ b)


def frobenius_norm(m) -> float:
    a = np.abs(np.asarray(m, dtype=np.complex128))
    top = float(a.max(initial=0.0))
    if top == 0.0 or not math.isfinite(top):
        return top
    # scaled so that squaring neither underflows nor overflows
    return top * math.sqrt(float(np.sum((a / top) ** 2)))


def unitarity_defect(q) -> float:
    """``||Q^dagger Q - I||_F``."""
    q = np.asarray(q, dtype=np.complex128)
    return frobenius_norm(q.conj().T @ q - np.eye(q.shape[1]))


def canonicalize_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its largest-modulus component is real and positive.

    Ties (moduli within PHASE_TIE_TOL of the maximum) go to the lowest index.
    The zero vector is returned unchanged.
    """
    v = np.array(v, dtype=np.complex128)
    mod = np.abs(v)
    top = mod.max()
    if top == 0.0:
        return v
    idx = int(np.flatnonzero(mod >= top - PHASE_TIE_TOL)[0])
    v *= np.conj(v[idx]) / mod[idx]
    v[idx] = mod[idx]
    return v


def gram_schmidt(cols: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of ``cols`` in index order.

    Modified Gram-Schmidt with one re-orthogonalization pass.
    """
    q = np.array(cols, dtype=np.complex128)
    for j in range(q.shape[1]):
        v = q[:, j]
        for _ in range(2):
            for k in range(j):
                v = v - (q[:, k].conj() @ v) * q[:, k]
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise DimensionError("columns are linearly dependent")
        q[:, j] = v / nrm
    return q


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a Hermitian matrix, eigenvalues nonincreasing.

    Column ``j`` of ``eigenvectors`` is the unit eigenvector for
    ``eigenvalues[j]``, phase-canonicalized.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def _off_norm(a: np.ndarray) -> float:
    return frobenius_norm(a - np.diag(a.diagonal()))


def _jacobi(h: np.ndarray, tol: float, max_sweeps: int, relative: bool) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128)
    target = tol * frobenius_norm(a)
    for sweep in range(max_sweeps + 1):
        rotated = False
        if not relative and _off_norm(a) <= target:
            return a.diagonal().real.copy(), q
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                mag = abs(apr)
                if mag < _TINY:
                    # subnormal: dividing by it would overflow
                    a[p, r] = a[r, p] = 0.0
                    continue
                if relative and mag <= tol * math.sqrt(abs(a[p, p].real)) * math.sqrt(abs(a[r, r].real)):
                    continue
                rotated = True
                ph = np.conj(apr / mag)
                diff = a[r, r].real - a[p, p].real
                if abs(diff) * 1e-150 > mag:
                    # theta would overflow; t -> 1 / (2 theta)
                    t = mag / diff
                else:
                    theta = diff / (2.0 * mag)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                # J = diag(1, e^{-i phi}) @ [[c, s], [-s, c]] on rows/cols (p, r) zeroes a[p, r]
                rot = np.array([[c, s], [-s * ph, c * ph]])
                pr = [p, r]
                a[:, pr] = a[:, pr] @ rot
                a[pr, :] = rot.conj().T @ a[pr, :]
                a[p, r] = a[r, p] = 0.0
                a[p, p] = a[p, p].real
                a[r, r] = a[r, r].real
                q[:, pr] = q[:, pr] @ rot
        if relative and not rotated:
            return a.diagonal().real.copy(), q
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def hermitian_eigendecompose(
    h,
    tol: float = DEFAULT_TOL,
    *,
    max_sweeps: int = MAX_SWEEPS,
    relative: bool = False,
) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    By default sweeps stop once the off-diagonal Frobenius mass is at most
    ``tol * ||H||_F``. With ``relative=True`` a pair is rotated whenever
    ``|h_pq| > tol * sqrt(|h_pp h_qq|)`` and sweeps stop when none is; for
    graded positive semidefinite input this resolves small eigenvalues to
    high relative accuracy.

    Eigenvalues come back nonincreasing (stable sort, so equal eigenvalues
    keep solver order). Columns inside a degenerate cluster, i.e. neighbours
    closer than ``tol * max(1, ||H||_F)``, are re-orthonormalized by
    Gram-Schmidt; every column is then phase-canonicalized.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_matrix(h, name="H")
    n, m = a.shape
    if n != m:
        raise DimensionError(f"H must be square, got {a.shape}")
    scale = max(1.0, frobenius_norm(a))
    if frobenius_norm(a - a.conj().T) > tol * scale:
        raise NotHermitianError("H is not Hermitian within tolerance")

    w, q = _jacobi(a, tol, max_sweeps, relative)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    q = q[:, order]

    start = 0
    for j in range(1, n + 1):
        if j == n or w[j - 1] - w[j] >= tol * scale:
            if j - start > 1:
                q[:, start:j] = gram_schmidt(q[:, start:j])
            start = j
    for j in range(n):
        q[:, j] = canonicalize_phase(q[:, j])
    return EigenDecomposition(frozen(w), frozen(q))
