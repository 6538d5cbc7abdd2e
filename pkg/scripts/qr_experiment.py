"""Print the invariant-section table for the shipped control and counterexample configs."""
from __future__ import annotations

import argparse
from pathlib import Path

from polyquant.modelfile import load, read_file
from polyquant.toric import qr_experiment

HERE = Path(__file__).resolve().parent.parent / "model_files"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=10)
    args = ap.parse_args()
    for name in ("qr_control", "qr_counterexample"):
        cfg = load(read_file(HERE / f"{name}.json"))
        cfg = type(cfg)(cfg.name, cfg.model, cfg.reduced, tuple(range(1, args.kmax + 1)), cfg.expect)
        rep = qr_experiment(cfg)
        print(f"{rep.name}: degrees {cfg.model.degrees}, action {cfg.model.action}")
        print(f"{'k':>3} {'shifts':>10} {'per weight':>12} {'LHS':>5} {'RHS':>5}")
        for r in rep.rows:
            print(f"{r.k:>3} {str(r.shifts):>10} {str(r.per_weight):>12} {r.lhs:>5} {r.rhs:>5}  {r.verdict}")
        print(f"asymptotic: {rep.asymptotic}\n")


if __name__ == "__main__":
    main()
