"""Why eigenvectors alone do not give an SVD.

[[1,2],[2,1]] and [[2,1],[1,2]] have the same A A^dagger and A^dagger A, so
any method that builds U and V from those products alone returns the same
U D V^dagger for both, and is wrong for at least one. The same holds for
[[2,-3i],[3i,2]] and [[3,-2i],[2i,3]]. The phase-solving step fixes it.

    python3 scripts/trap_pairs.py
"""

import numpy as np

from phasesvd import build_unitaries_step1, reconstruct, svd
from phasesvd.io_formats import format_real

PAIRS = [
    (np.array([[1, 2], [2, 1]], dtype=complex), np.array([[2, 1], [1, 2]], dtype=complex)),
    (np.array([[2, -3j], [3j, 2]]), np.array([[3, -2j], [2j, 3]])),
]


def naive(a):
    u0, v0, sigma_sq = build_unitaries_step1(a)
    d = np.zeros(a.shape)
    np.fill_diagonal(d, np.sqrt(np.clip(sigma_sq, 0, None)))
    return u0 @ d @ v0.conj().T


def main():
    for a, b in PAIRS:
        assert np.allclose(a @ a.conj().T, b @ b.conj().T)
        for name, m in (("A", a), ("B", b)):
            naive_err = np.linalg.norm(naive(m) - m)
            f = svd(m)
            fixed_err = np.linalg.norm(reconstruct(f) - m)
            print(
                f"{name} = {m.tolist()}\n"
                f"  sigma {[format_real(s) for s in f.sigma]}, d {np.round(f.d, 12).tolist()}\n"
                f"  eigenvectors only: ||U0 D V0^+ - {name}|| = {naive_err:.3g}\n"
                f"  with phases:       ||U D V^+ - {name}||   = {fixed_err:.3g}"
            )
        print()


if __name__ == "__main__":
    main()
