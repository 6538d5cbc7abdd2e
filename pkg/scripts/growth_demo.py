"""Dimension growth of rr_index against the adapted volume on a few product-of-lines models."""
from __future__ import annotations

from polyquant.models import ManifoldPresentation, growth_check

MODELS = {
    "line d=3": [[3]],
    "two lines (1,2)": [[1, 2]],
    "two weights (1,2),(2,1)": [[1, 2], [2, 1]],
    "three lines (1,1,2)": [[1, 1, 2]],
}


def main() -> None:
    for name, degs in MODELS.items():
        m = ManifoldPresentation.from_degrees(degs)
        g = growth_check(m, range(1, 9))
        print(f"{name}: vol={g.volume} leading={g.leading} match={g.matches}")
        print("  dims      ", g.dims)
        print("  remainders", [str(r) for r in g.remainders])


if __name__ == "__main__":
    main()
