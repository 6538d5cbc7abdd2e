"""Quantization versus reduction on products of projective lines with a circle action.

Holomorphic sections of the weight-λ line bundle of multidegree d on (P^1)^n at
level k are spanned by monomials z^m with 0 <= m_j <= k d_j. A circle acting
with weights a_j on the factors, linearized with shift s, fixes exactly the
monomials with Σ a_j m_j = s. Everything is counted by explicit enumeration.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .models import ManifoldPresentation, rr_index


class ConfigInvalid(ValueError):
    pass


class NotTransverse(ValueError):
    pass


@dataclass(frozen=True)
class ToricBundleModel:
    """Per-weight degree rows on n lines, circle weights per factor, and a shift per weight.

    ``shifts`` are rationals per unit level; at level k the shift is
    floor(k * s) unless ``pinned`` supplies the integers for that k.
    """

    degrees: tuple
    action: tuple
    shifts: tuple
    pinned: tuple = ()

    def __post_init__(self):
        degs = tuple(tuple(int(d) for d in r) for r in self.degrees)
        if not degs:
            raise ConfigInvalid("at least one weight is required")
        n = len(degs[0])
        if any(len(r) != n for r in degs):
            raise ConfigInvalid("degree rows must have equal length")
        if any(d < 0 for r in degs for d in r):
            raise ConfigInvalid("degrees must be nonnegative")
        act = tuple(int(a) for a in self.action)
        if len(act) != n:
            raise ConfigInvalid("one action weight per factor")
        shifts = tuple(la.frac(s) for s in self.shifts)
        if len(shifts) != len(degs):
            raise ConfigInvalid("one shift per weight")
        pins = tuple(sorted((int(k), tuple(int(x) for x in v)) for k, v in dict(self.pinned).items()))
        if any(len(v) != len(degs) for _, v in pins):
            raise ConfigInvalid("pinned shifts need one entry per weight")
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "action", act)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "pinned", pins)

    @property
    def n_factors(self) -> int:
        return len(self.action)

    @property
    def n_weights(self) -> int:
        return len(self.degrees)

    def shifts_at(self, k: int) -> tuple[int, ...]:
        pins = dict(self.pinned)
        if k in pins:
            return pins[k]
        return tuple(math.floor(k * s) for s in self.shifts)

    def presentation(self) -> ManifoldPresentation:
        return ManifoldPresentation.from_degrees(self.degrees)

    def relabel(self, perm: Sequence[int]) -> "ToricBundleModel":
        """Reorder factors (and their action weights) by ``perm``."""
        return ToricBundleModel(tuple(tuple(r[p] for p in perm) for r in self.degrees),
                                tuple(self.action[p] for p in perm), self.shifts, self.pinned)


def _box(d: Sequence[int], k: int):
    return itertools.product(*(range(k * dj + 1) for dj in d))


def holomorphic_dim(model: ToricBundleModel, k: int) -> int:
    return sum(sum(1 for _ in _box(d, k)) for d in model.degrees)


def invariant_counts(model: ToricBundleModel, k: int) -> list[int]:
    """Per-weight number of monomials on the slice Σ a_j m_j = shift."""
    out = []
    for d, s in zip(model.degrees, model.shifts_at(k)):
        out.append(sum(1 for m in _box(d, k) if sum(a * x for a, x in zip(model.action, m)) == s))
    return out


def invariant_dim(model: ToricBundleModel, k: int) -> int:
    return sum(invariant_counts(model, k))


@dataclass(frozen=True)
class ReducedModel:
    """Declared reduced space: either finitely many points or a presentation quantized by rr_index."""

    points: int = 0
    rank: int = 0
    presentation: ManifoldPresentation | None = None
    from_moment_lines: bool = False

    def dimension(self, k: int) -> int:
        if self.presentation is not None:
            return rr_index(self.presentation, k)
        return self.points * self.rank


@dataclass(frozen=True)
class QRConfig:
    name: str
    model: ToricBundleModel
    reduced: ReducedModel
    k_range: tuple = tuple(range(1, 11))
    expect: str = "≠"


@dataclass
class QRRow:
    k: int
    shifts: tuple
    per_weight: list[int]
    lhs: int
    rhs: int
    verdict: str


@dataclass
class QRReport:
    name: str
    rows: list[QRRow]
    asymptotic: str
    notes: list[str] = field(default_factory=list)

    def row(self, k: int) -> QRRow:
        return next(r for r in self.rows if r.k == k)


def qr_experiment(config: QRConfig) -> QRReport:
    """Compare dim of invariant sections upstairs (LHS) with the reduced quantization (RHS)."""
    ks = list(config.k_range)
    if not ks:
        raise ConfigInvalid("empty k range")
    if any(int(k) != k or k < 1 for k in ks):
        raise ConfigInvalid("k must be a positive integer")
    rows, notes = [], []
    for k in ks:
        per = invariant_counts(config.model, k)
        lhs, rhs = sum(per), config.reduced.dimension(k)
        rows.append(QRRow(k, config.model.shifts_at(k), per, lhs, rhs, "=" if lhs == rhs else "≠"))
        for i, c in enumerate(per):
            if c == 0:
                notes.append(f"k={k}: slice of weight {i} is empty")
    lhs = [r.lhs for r in rows]
    rhs = [r.rhs for r in rows]
    if all(r.verdict == "=" for r in rows):
        asym = "="
    elif len(set(rhs)) == 1 and all(b > a for a, b in zip(lhs, lhs[1:])):
        asym = "≠ (LHS strictly increasing, RHS constant)"
    else:
        asym = "≠"
    return QRReport(config.name, rows, asym, notes)


def moment_line_intersections(model: ToricBundleModel) -> list[tuple[tuple[int, int], tuple[Fraction, ...]]]:
    """Pairwise intersections of the lines Σ_j a_j d_λj t_j = s_λ in normalized moment coordinates."""
    if model.n_factors != 2:
        raise ConfigInvalid("moment lines need exactly two factors")
    rows = [[Fraction(a * d) for a, d in zip(model.action, r)] for r in model.degrees]
    out = []
    for i, j in itertools.combinations(range(model.n_weights), 2):
        m = [rows[i], rows[j]]
        if la.det(m) == 0:
            raise NotTransverse(f"moment lines of weights {i} and {j} are parallel")
        t = la.solve(m, [model.shifts[i], model.shifts[j]])
        out.append(((i, j), tuple(t)))
    return out


def reduced_point_model(model: ToricBundleModel) -> tuple[ManifoldPresentation, list]:
    """Zero-dimensional reduced model carried by the transverse intersection points.

    Every weight survives on the point, so the fiber of the reduced bundle has
    rank equal to the number of weights; distinct points add as multiplicity.
    """
    pts = moment_line_intersections(model)
    if not pts:
        raise NotTransverse("need at least two weights")
    for _, t in pts:
        if not all(0 <= x <= 1 for x in t):
            raise NotTransverse(f"intersection {t} leaves the moment square")
    distinct = len({t for _, t in pts})
    ell = model.n_weights
    weights = tuple(tuple(int(i == j) for i in range(ell)) for j in range(ell))
    pres = ManifoldPresentation(ell, weights, tuple(() for _ in range(ell)), (), None, (distinct,) * ell)
    return pres, pts


def counterexample_config(k_range: Sequence[int] = tuple(range(1, 11))) -> QRConfig:
    model = ToricBundleModel(((1, 2), (2, 1)), (1, 1), ("3/2", "3/2"))
    pins = tuple((k, model.shifts_at(k)) for k in k_range)
    model = ToricBundleModel(model.degrees, model.action, model.shifts, pins)
    pres, _ = reduced_point_model(model)
    return QRConfig("counterexample", model, ReducedModel(presentation=pres, from_moment_lines=True),
                    tuple(k_range), "≠")


def control_config(k_range: Sequence[int] = tuple(range(1, 11))) -> QRConfig:
    model = ToricBundleModel(((2, 2),), (1, 1), (2,))
    reduced = ReducedModel(presentation=ManifoldPresentation.from_degrees([[2]]))
    return QRConfig("control", model, reduced, tuple(k_range), "=")
