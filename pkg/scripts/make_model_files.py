"""Regenerate the shipped JSON model files in model_files/."""
from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

from polyquant import linalg as la
from polyquant.lattice import PeriodData
from polyquant.modelfile import LatticeInput, VSpaceModel, dump, emit
from polyquant.models import ManifoldPresentation, MonodromyPresentation
from polyquant.reps import AbelianRep
from polyquant.toric import control_config, counterexample_config
from polyquant.vsympl import (canonical_complex_structure, heisenberg_structure_constants, make_canonical_model,
                              make_lie_model, plane_product, standard_complex_structure,
                              su2_structure_constants)


def rotated_rep() -> AbelianRep:
    """diag(i, 2i) and diag(3i, -i) conjugated by the rational rotation (3/5, 4/5)."""
    c, s = Fraction(3, 5), Fraction(4, 5)
    r = [[c, -s], [s, c]]
    rt = la.transpose(r)
    gens = []
    for a, b in ((1, 2), (3, -1)):
        d = [[la.I * a, 0], [0, la.I * b]]
        gens.append(tuple(tuple(row) for row in la.matmul(la.matmul(r, d), rt)))
    return AbelianRep(2, 2, tuple(gens))


def models() -> dict:
    su2 = su2_structure_constants()
    heis = heisenberg_structure_constants()
    std = lambda ell: tuple(tuple(int(i == j) for i in range(ell)) for j in range(ell))  # noqa: E731
    swap = ((0, 1), (1, 0))
    return {
        "canonical_2_3": VSpaceModel(make_canonical_model(2, 3), None,
                                     canonical_complex_structure(standard_complex_structure(1), 3), std(3)),
        "plane_compatible": VSpaceModel(plane_product(2), None, standard_complex_structure(2), ((1,),)),
        "su2_lie": VSpaceModel(make_lie_model(su2), tuple(tuple(tuple(r) for r in m) for m in su2)),
        "heisenberg_lie": VSpaceModel(make_lie_model(heis), tuple(tuple(tuple(r) for r in m) for m in heis)),
        "rep_rotated": rotated_rep(),
        "classify_periods": LatticeInput(PeriodData(2, ((2, 0), (3, 0), (0, 5)))),
        "classify_standard": LatticeInput(PeriodData(2, ((1, 0), (0, 1))), ((1, 0), (0, 1))),
        "classify_exact": LatticeInput(PeriodData(2, ())),
        "classify_skew_basis": LatticeInput(PeriodData(2, ((2, 0), (1, 1))), ((2, 0), (1, 1))),
        "growth_line_d3": ManifoldPresentation.from_degrees([[3]]),
        "growth_two_lines_1_2": ManifoldPresentation.from_degrees([[1, 2]]),
        "growth_two_weights": ManifoldPresentation.from_degrees([[1, 2], [2, 1]]),
        "genus_two_curve": ManifoldPresentation.from_degrees([[3]], [2]),
        "qr_counterexample": counterexample_config(),
        "qr_control": control_config(),
        "monodromy_swap": MonodromyPresentation(2, (swap,), std(2)),
        "monodromy_scaled": MonodromyPresentation(2, (((2, 0), (0, 2)),), std(2)),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parent.parent / "model_files"))
    args = ap.parse_args()
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, obj in models().items():
        (out / f"{name}.json").write_text(emit(dump(obj)), encoding="utf-8")
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
