"""Split random commuting skew-Hermitian families into weights and report reconstruction error."""
from __future__ import annotations

import argparse
import os

import numpy as np

from polyquant.reps import AbelianRep, rebuild_generators, weight_decomposition


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=10)
    args = ap.parse_args()
    rng = np.random.default_rng(int(os.environ.get("POLYQUANT_SEED", "0")))
    for _ in range(args.n):
        r, ell = int(rng.integers(1, 9)), int(rng.integers(1, 5))
        mus = rng.integers(-3, 4, size=(r, ell)).astype(float)
        q, _ = np.linalg.qr(rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r)))
        gens = tuple(q @ np.diag(1j * mus[:, j]) @ q.conj().T for j in range(ell))
        ws = weight_decomposition(AbelianRep(ell, r, gens))
        err = max(np.abs(a - b).max() for a, b in zip(rebuild_generators(ws), gens))
        print(f"r={r} l={ell} weights={len(ws.weights)} multiplicities={ws.multiplicities} err={err:.1e}")


if __name__ == "__main__":
    main()
