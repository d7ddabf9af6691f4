"""Random sweep over shapes and conventions; prints worst-case errors and timing.

    python3 scripts/property_sweep.py --count 500 --max-side 8 --rank-deficient 0.3
"""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from phasesvd import ALL_IN_U, ALL_IN_V, HALF_HALF, reconstruct, svd
from phasesvd.linalg_core import frobenius_norm, unitarity_defect


@dataclass(frozen=True)
class SweepConfig:
    count: int = 500
    max_side: int = 8
    rank_deficient: float = 0.3  # fraction of matrices built as a low-rank product
    seed: int = 0


def sample(rng, cfg):
    m, n = (int(x) for x in rng.integers(1, cfg.max_side + 1, size=2))
    if rng.random() < cfg.rank_deficient:
        r = int(rng.integers(0, min(m, n) + 1))
        left = rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))
        right = rng.normal(size=(r, n)) + 1j * rng.normal(size=(r, n))
        return left @ right
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def run(cfg):
    rng = np.random.default_rng(cfg.seed)
    worst = {"residual": 0.0, "unitarity": 0.0, "convention spread": 0.0}
    start = time.perf_counter()
    for _ in range(cfg.count):
        a = sample(rng, cfg)
        scale = max(1.0, frobenius_norm(a))
        fs = [svd(a, c) for c in (ALL_IN_U, ALL_IN_V, HALF_HALF)]
        recon = [reconstruct(f) for f in fs]
        for f, r in zip(fs, recon):
            worst["residual"] = max(worst["residual"], frobenius_norm(r - a) / scale)
            worst["unitarity"] = max(worst["unitarity"], unitarity_defect(f.U), unitarity_defect(f.V))
        spread = max(frobenius_norm(r - recon[0]) / scale for r in recon)
        worst["convention spread"] = max(worst["convention spread"], spread)
    elapsed = time.perf_counter() - start
    return worst, elapsed


def main():
    defaults = SweepConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=defaults.count)
    p.add_argument("--max-side", type=int, default=defaults.max_side)
    p.add_argument("--rank-deficient", type=float, default=defaults.rank_deficient)
    p.add_argument("--seed", type=int, default=defaults.seed)
    ns = p.parse_args()
    cfg = SweepConfig(ns.count, ns.max_side, ns.rank_deficient, ns.seed)
    worst, elapsed = run(cfg)
    print(cfg)
    for k, v in worst.items():
        print(f"  worst {k}: {v:.3e}")
    print(f"  {cfg.count} matrices x 3 conventions in {elapsed:.2f} s ({1e3 * elapsed / (3 * cfg.count):.2f} ms per svd)")


if __name__ == "__main__":
    main()
