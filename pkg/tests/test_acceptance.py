"""Acceptance criteria 1-9.

Each test records one PASS/FAIL line (printed in the pytest terminal
summary and, with ``-s``, as the test runs) and then asserts the outcome.
"""

import json
import math
from pathlib import Path

import numpy as np

from phasesvd.cli import main
from phasesvd.io_formats import load_result, parse_matrix
from phasesvd.linalg_core import frobenius_norm, unitarity_defect
from phasesvd.phase_svd import (
    ALL_IN_U,
    ALL_IN_V,
    HALF_HALF,
    build_unitaries_step1,
    rank_one_terms,
    reconstruct,
    solve_diagonal_step2,
    svd,
    svd_from_unitaries,
)
from phasesvd.schmidt import (
    BipartiteState,
    amplitudes_to_matrix,
    max_entropy_bits,
    reconstruct_state,
    schmidt_decompose,
)

from conftest import MINUS, MINUS_Y, PLUS, PLUS_Y, SQ2, haar_unitary, random_complex, random_phases

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
RESULTS: list[str] = []

X_BASIS = np.column_stack([PLUS, MINUS])
Y_BASIS = np.column_stack([PLUS_Y, MINUS_Y])
EX1 = np.array([[1, 2], [2, 1]], dtype=complex)
EX2 = np.array([[2, -3j], [3j, 2]])
EX3 = np.array([[1, 1, 1j], [1, -1, 1j]])
EX3_V = np.column_stack([np.array([1j, 0, 1]) / SQ2, [0, 1, 0], np.array([-1j, 0, 1]) / SQ2])


def record(number, title, checks):
    """checks: mapping of description -> (measured error, bound)."""
    failed = [f"{k}={err:.3g}>{bound:g}" for k, (err, bound) in checks.items() if not err <= bound]
    worst = max((err / bound if bound else (0.0 if err == 0 else math.inf)) for err, bound in checks.values())
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {number}: {status}  {title}  (worst error/bound {worst:.2e})"
    if failed:
        line += "  failed: " + ", ".join(failed)
    RESULTS.append(line)
    print(line)
    assert not failed, line


def max_abs(x):
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def test_criterion_1_example_one():
    f = svd(EX1, ALL_IN_U)
    d = solve_diagonal_step2(EX1, X_BASIS, X_BASIS).d
    record(1, "example (1): sigma, worked d, AllInU U and V", {
        "sigma": (max_abs(f.sigma - [3, 1]), 1e-12),
        "d": (max_abs(d - [3, -1]), 1e-12),
        "U": (max_abs(f.U - np.array([[1, -1], [1, 1]]) / SQ2), 1e-12),
        "V": (max_abs(f.V - np.array([[1, 1], [1, -1]]) / SQ2), 1e-12),
    })


def test_criterion_2_example_two():
    f = svd(EX2)
    d = solve_diagonal_step2(EX2, Y_BASIS, Y_BASIS).d
    record(2, "example (2): sigma, worked d, residual", {
        "sigma": (max_abs(f.sigma - [5, 1]), 1e-12),
        "d": (max_abs(d - [5, -1]), 1e-12),
        "residual": (frobenius_norm(reconstruct(f) - EX2), 1e-12),
    })


def test_criterion_3_trap_pairs():
    checks = {}
    for name in ("A1", "A2"):
        a = parse_matrix((FIXTURES / f"trap_{name}.mat").read_text())
        b = {"A1": EX1, "A2": EX2}[name]
        fa, fb = svd(a), svd(b)
        checks[f"{name} shared D"] = (max_abs(fa.sigma - fb.sigma), 1e-12)
        checks[f"{name} residual"] = (frobenius_norm(reconstruct(fa) - a), 1e-12)
        checks[f"{name} partner residual"] = (frobenius_norm(reconstruct(fb) - b), 1e-12)
    record(3, "trap pairs sharing D each reconstruct to themselves", checks)


def test_criterion_4_example_three():
    f = svd(EX3)
    d = solve_diagonal_step2(EX3, X_BASIS, EX3_V).d
    record(4, "example (3) rectangular: sigma and worked d", {
        "sigma": (max_abs(f.sigma - [2, SQ2]), 1e-12),
        "d": (max_abs(d - [2j, SQ2]), 1e-12),
        "residual": (frobenius_norm(reconstruct(f) - EX3), 1e-9),
    })


def test_criterion_5_example_four():
    amps = np.array([2j, 1, 1, 2]) / math.sqrt(10)
    psi = BipartiteState(2, 2, amps)
    sd = schmidt_decompose(psi)
    u0 = np.array([[SQ2, -SQ2], [1 - 1j, 1 - 1j]]) / 2
    v0 = np.array([[SQ2, -SQ2], [1 + 1j, 1 + 1j]]) / 2
    d0 = solve_diagonal_step2(amplitudes_to_matrix(psi), u0, v0).d[0]
    record(5, "example (4) Schmidt: coefficients, worked d0, round trip", {
        "coefficients^2": (max_abs(sd.coefficients**2 - [(5 + 2 * SQ2) / 10, (5 - 2 * SQ2) / 10]), 1e-12),
        "d0": (abs(d0 - (SQ2 + (4 + SQ2) * 1j) / (2 * math.sqrt(10))), 1e-12),
        "round trip": (max_abs(reconstruct_state(sd) - amps), 1e-10),
    })


def random_case(rng):
    m, n = (int(x) for x in rng.integers(1, 9, size=2))
    if rng.random() < 0.25:
        r = int(rng.integers(0, min(m, n) + 1))
        return random_complex(rng, m, r) @ random_complex(rng, r, n)
    return random_complex(rng, m, n)


def test_criterion_6_property_suite():
    rng = np.random.default_rng(6)
    worst = dict.fromkeys(["residual", "unitarity", "ordering", "conventions", "rank-one terms"], 0.0)
    shapes = set()
    for _ in range(1000):
        a = random_case(rng)
        shapes.add(a.shape)
        scale = max(1.0, frobenius_norm(a))
        fs = [svd(a, c) for c in (ALL_IN_U, ALL_IN_V, HALF_HALF)]
        recon = [reconstruct(f) for f in fs]
        for f, r in zip(fs, recon):
            worst["residual"] = max(worst["residual"], frobenius_norm(r - a) / scale)
            worst["unitarity"] = max(worst["unitarity"], unitarity_defect(f.U), unitarity_defect(f.V))
            worst["ordering"] = max(worst["ordering"], float(np.max(np.diff(f.sigma), initial=0.0)))
        for r in recon[1:]:
            worst["conventions"] = max(worst["conventions"], frobenius_norm(r - recon[0]) / scale)
        u0, v0, _ = build_unitaries_step1(a)
        m, n = a.shape
        base = rank_one_terms(svd_from_unitaries(a, u0, v0))
        moved = rank_one_terms(svd_from_unitaries(a, u0 * random_phases(rng, m), v0 * random_phases(rng, n), HALF_HALF))
        if len(base) != len(moved):
            worst["rank-one terms"] = math.inf
        for t, s in zip(base, moved):
            worst["rank-one terms"] = max(worst["rank-one terms"], frobenius_norm(t - s) / scale)
    assert any(m != n for m, n in shapes)
    record(6, f"1000 random matrices, {len(shapes)} shapes up to 8x8", {
        "residual": (worst["residual"], 1e-9),
        "unitarity": (worst["unitarity"], 1e-10),
        "sigma increase": (worst["ordering"], 0.0),
        "cross-convention": (worst["conventions"], 1e-10),
        "rank-one terms": (worst["rank-one terms"], 1e-9),
    })


def test_criterion_7_degenerate_sigma():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(3, 9))
        sigma, tau = sorted(rng.uniform(0.05, 5.0, size=2), reverse=bool(rng.integers(2)))
        vals = np.full(n, tau)
        vals[:2] = sigma
        a = haar_unitary(rng, n) @ np.diag(vals) @ haar_unitary(rng, n).conj().T
        for conv in (ALL_IN_U, ALL_IN_V, HALF_HALF):
            f = svd(a, conv)
            worst = max(worst, frobenius_norm(reconstruct(f) - a) / max(1.0, frobenius_norm(a)))
    record(7, "200 matrices Q1 diag(s, s, t, ...) Q2^dagger, every convention", {"residual": (worst, 1e-9)})


def test_criterion_8_schmidt_properties():
    rng = np.random.default_rng(8)
    worst = dict.fromkeys(["norm", "orthonormal", "round trip", "entropy", "local unitary"], 0.0)
    for _ in range(500):
        da, db = (int(x) for x in rng.integers(1, 7, size=2))
        amps = random_complex(rng, da * db)
        amps /= np.linalg.norm(amps)
        psi = BipartiteState(da, db, amps)
        sd = schmidt_decompose(psi)
        worst["norm"] = max(worst["norm"], abs(np.sum(sd.coefficients**2) - 1.0))
        for basis in (sd.basis_a, sd.basis_b):
            worst["orthonormal"] = max(worst["orthonormal"], max_abs(basis.conj() @ basis.T - np.eye(len(basis))))
        worst["round trip"] = max(worst["round trip"], max_abs(reconstruct_state(sd) - amps))
        low, high = 0.0, max_entropy_bits(da, db) + 1e-12
        worst["entropy"] = max(worst["entropy"], low - sd.entropy_bits, sd.entropy_bits - high)
        mat = haar_unitary(rng, da) @ amps.reshape(da, db) @ haar_unitary(rng, db).T
        moved = schmidt_decompose(BipartiteState(da, db, mat.reshape(-1)))
        worst["local unitary"] = max(worst["local unitary"], max_abs(moved.coefficients - sd.coefficients))
    record(8, "500 random states up to 6x6", {
        "norm": (worst["norm"], 1e-10),
        "orthonormality": (worst["orthonormal"], 1e-10),
        "round trip": (worst["round trip"], 1e-10),
        "entropy outside bounds": (worst["entropy"], 0.0),
        "local unitary": (worst["local unitary"], 1e-10),
    })


def test_criterion_9_cli_golden(capsys):
    checks = {}
    for name in ("example1.mat", "example2.mat", "example3.mat", "example4.mat"):
        path = FIXTURES / name
        code = main(["verify", str(path)])
        capsys.readouterr()
        checks[f"verify {name} exit"] = (float(code), 0.0)
        code = main(["svd", str(path), "--output", "json"])
        out = capsys.readouterr().out
        back = load_result(out)
        f = svd(parse_matrix(path.read_text()))
        mismatch = sum(back[k].tobytes() != getattr(f, k).tobytes() for k in ("U", "sigma", "V", "d", "phase_u", "phase_v"))
        mismatch += back["residual"] != f.residual
        checks[f"svd {name} exit"] = (float(code), 0.0)
        checks[f"json {name} mismatched fields"] = (float(mismatch), 0.0)
        assert json.loads(out)["convention"] == "AllInU"
    record(9, "CLI verify over the four fixtures and JSON reparse", checks)
