"""Desk-scale models of polysymplectic Kähler manifolds built from products of curves.

A model is topological data only: for every weight (a rational covector in
units of 2πi) a degree on each curve factor, plus the genus of each factor.
Degrees and periods are tied by ``deg[λ][j] = <w_λ, P_j>`` where ``P_j`` is
the V-valued period of the form over the j-th factor class.

Characteristic numbers are computed in the cohomology ring of the product,
Q[x_1..x_n]/(x_j^2), with x_j the point class of factor j.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg as la
from .lattice import PeriodData
from .reps import NotPrequantizable


class InconsistentDegrees(ValueError):
    pass


class NotPositive(ValueError):
    pass


class WeightsNotPermuted(ValueError):
    pass


class ConventionMismatch(ValueError):
    pass


# --- square-zero cohomology ring -------------------------------------------------
# an element is a dict {frozenset of factor indices: Fraction}


def _ring_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            m = ma | mb
            out[m] = out.get(m, Fraction(0)) + ca * cb
    return {m: c for m, c in out.items() if c != 0}


def _ring_prod(elems) -> dict:
    out = {frozenset(): Fraction(1)}
    for e in elems:
        out = _ring_mul(out, e)
    return out


def _exp_linear(coeffs: Sequence) -> dict:
    """exp(sum c_j x_j) = prod (1 + c_j x_j) since x_j^2 = 0."""
    return _ring_prod({frozenset(): Fraction(1), frozenset([j]): Fraction(c)} for j, c in enumerate(coeffs))


def _integrate(elem: dict, n: int) -> Fraction:
    return elem.get(frozenset(range(n)), Fraction(0))


# --- presentations ---------------------------------------------------------------


@dataclass(frozen=True)
class ManifoldPresentation:
    """Product of n curves with per-weight degrees.

    ``weights`` are distinct rational covectors on V (units of 2πi) with
    ``multiplicities``; ``degrees[i][j]`` is the degree of the weight-i line
    bundle on factor j; ``periods`` holds one V-vector per factor.
    """

    dim_v: int
    weights: tuple
    degrees: tuple
    genera: tuple = ()
    periods: PeriodData | None = None
    multiplicities: tuple = ()

    def __post_init__(self):
        ws = tuple(tuple(la.frac(x) for x in w) for w in self.weights)
        degs = tuple(tuple(int(d) for d in row) for row in self.degrees)
        if any(len(w) != self.dim_v for w in ws):
            raise ValueError(f"weights must have length {self.dim_v}")
        if len(degs) != len(ws):
            raise ValueError("one degree row per weight")
        n = len(degs[0]) if degs else len(self.genera)
        if any(len(r) != n for r in degs):
            raise ValueError("degree rows must have equal length")
        genera = tuple(int(g) for g in self.genera) if self.genera else (0,) * n
        if len(genera) != n or any(g < 0 for g in genera):
            raise ValueError("one nonnegative genus per factor")
        mults = tuple(int(m) for m in self.multiplicities) if self.multiplicities else (1,) * len(ws)
        if len(mults) != len(ws) or any(m < 1 for m in mults):
            raise ValueError("one positive multiplicity per weight")
        if len(set(ws)) != len(ws):
            raise ValueError("weights must be distinct; use multiplicities")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "genera", genera)
        object.__setattr__(self, "multiplicities", mults)
        if self.periods is not None:
            if self.periods.dim_v != self.dim_v or len(self.periods.periods) != n:
                raise InconsistentDegrees("need one period vector in V per factor")
            for i, w in enumerate(ws):
                for j, p in enumerate(self.periods.periods):
                    if la.dot(w, p) != degs[i][j]:
                        raise InconsistentDegrees(
                            f"weight {i} pairs with period {j} to {la.dot(w, p)}, degree is {degs[i][j]}")

    @property
    def half_dim(self) -> int:
        return len(self.genera)

    @property
    def h2_rank(self) -> int:
        return self.half_dim

    def expanded(self) -> list[tuple[tuple, tuple]]:
        """(weight, degree row) pairs repeated by multiplicity."""
        return [(w, d) for w, d, m in zip(self.weights, self.degrees, self.multiplicities) for _ in range(m)]

    def faithful(self) -> bool:
        return bool(self.weights) and la.rank([list(w) for w in self.weights], self.dim_v) == self.dim_v

    @classmethod
    def from_degrees(cls, degrees: Sequence[Sequence[int]], genera: Sequence[int] = ()) -> "ManifoldPresentation":
        """Minimal-rank model: weights are the standard dual basis of V = Q^{#weights},
        and the period over factor j is the j-th column of the degree table."""
        degs = [list(map(int, r)) for r in degrees]
        ell = len(degs)
        n = len(degs[0]) if degs else len(genera)
        weights = [tuple(int(i == j) for i in range(ell)) for j in range(ell)]
        periods = PeriodData(ell, tuple(tuple(degs[i][j] for i in range(ell)) for j in range(n)))
        return cls(ell, tuple(weights), tuple(map(tuple, degs)), tuple(genera), periods)


def adapted_volume(model: ManifoldPresentation) -> Fraction:
    """(1 / ((2π)^n n!)) Σ_λ ∫ ω_λ^n, with [ω_λ / 2π] = Σ_j d_λj x_j."""
    n = model.half_dim
    total = Fraction(0)
    for _, d in model.expanded():
        c = {frozenset([j]): Fraction(dj) for j, dj in enumerate(d) if dj}
        power = {frozenset(): Fraction(1)}
        for _ in range(n):
            power = _ring_mul(power, c)
        total += _integrate(power, n) / factorial(n)
    return total


def todd_class(model: ManifoldPresentation) -> dict:
    """Td of a product of curves: prod (1 + (1 - g_j) x_j)."""
    return _exp_linear([1 - g for g in model.genera])


def rr_index(model: ManifoldPresentation, k: int) -> int:
    """∫ ch(E^k) Td(M) with E^k the k-th power of each weight line bundle."""
    n = model.half_dim
    td = todd_class(model)
    total = Fraction(0)
    for _, d in model.expanded():
        total += _integrate(_ring_mul(_exp_linear([k * dj for dj in d]), td), n)
    if total.denominator != 1:
        raise AssertionError("index is not an integer")
    return int(total)


def rr_index_closed_form(model: ManifoldPresentation, k: int) -> int:
    """Σ_λ ∏_j (k d_λj + 1 - g_j)."""
    total = 0
    for _, d in model.expanded():
        p = 1
        for dj, g in zip(d, model.genera):
            p *= k * dj + 1 - g
        total += p
    return total


def finite_difference(values: Sequence[int], order: int) -> list[int]:
    vals = list(values)
    for _ in range(order):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals


@dataclass
class GrowthReport:
    ks: list[int]
    dims: list[int]
    volume: Fraction
    leading: Fraction
    matches: bool
    polynomial: bool
    remainders: list[Fraction]
    notes: list[str] = field(default_factory=list)


def growth_check(model: ManifoldPresentation, k_range: Sequence[int]) -> GrowthReport:
    """Fit the leading coefficient of k -> rr_index(k) by order-n finite differences."""
    if not model.weights:
        raise NotPositive("empty weight set")
    if any(d <= 0 for row in model.degrees for d in row):
        raise NotPositive("every weight line bundle must have positive degree on every factor")
    ks = sorted(set(int(k) for k in k_range))
    n = model.half_dim
    if len(ks) < n + 1 or ks != list(range(ks[0], ks[0] + len(ks))):
        raise ValueError(f"need at least {n + 1} consecutive values of k")
    if ks[0] < 1:
        raise ValueError("k must be positive")
    dims = [rr_index(model, k) for k in ks]
    diffs = finite_difference(dims, n)
    leading = Fraction(diffs[0], factorial(n))
    vol = adapted_volume(model)
    constant = all(x == diffs[0] for x in diffs)
    remainders = [d - vol * k**n for k, d in zip(ks, dims)]
    notes = []
    if any(g > 0 for g in model.genera):
        notes.append("positive genus factors: index reported, equal to dimension once k d > 2g - 2")
    notes.append("checked on products of curves only")
    return GrowthReport(ks, dims, vol, leading, leading == vol and constant, constant, remainders, notes)


# --- monodromy -------------------------------------------------------------------


@dataclass(frozen=True)
class MonodromyPresentation:
    dim_v: int
    generators: tuple
    weights: tuple
    multiplicities: tuple = ()

    def __post_init__(self):
        gens = tuple(tuple(tuple(la.frac(x) for x in r) for r in g) for g in self.generators)
        for i, g in enumerate(gens):
            if len(g) != self.dim_v or any(len(r) != self.dim_v for r in g):
                raise ValueError(f"generator {i} has the wrong shape")
            if la.det([list(r) for r in g]) == 0:
                raise ValueError(f"generator {i} is not invertible")
        ws = tuple(tuple(la.frac(x) for x in w) for w in self.weights)
        mults = tuple(self.multiplicities) if self.multiplicities else (1,) * len(ws)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "multiplicities", mults)
        if la.rank([list(w) for w in ws], self.dim_v) != self.dim_v:
            raise ValueError("weights do not span V*")


def pull_back_weight(w: Sequence, tau) -> tuple:
    """w o tau^{-1} as a row vector."""
    inv = la.inverse([list(r) for r in tau])
    return tuple(la.matvec(la.transpose(inv), list(w)))


def monodromy_weight_action(pres: MonodromyPresentation) -> list[tuple[int, ...]]:
    """For each generator, the permutation p with w_i o tau^{-1} = w_{p[i]}."""
    index = {w: i for i, w in enumerate(pres.weights)}
    base = Counter(dict(zip(pres.weights, pres.multiplicities)))
    perms = []
    for g, tau in enumerate(pres.generators):
        moved = [pull_back_weight(w, tau) for w in pres.weights]
        if Counter(dict(zip(moved, pres.multiplicities))) != base:
            raise WeightsNotPermuted(f"generator {g} does not permute the weights")
        perms.append(tuple(index[m] for m in moved))
    return perms


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)[i] = p[q[i]]."""
    return tuple(p[i] for i in q)


# --- products --------------------------------------------------------------------


def product_model(a: ManifoldPresentation, b: ManifoldPresentation, mode: str = "doubling") -> ManifoldPresentation:
    """Product M_a x M_b.

    ``doubling``: V = V_a + V_b with form ω_a ⊕ ω_b; bundle E_a ⊕ E_b, weights
    (λ, 0) and (0, μ), so the degree table is block diagonal.
    ``same_v``: common V, balanced tensor product; a weight survives when both
    sides carry it, with multiplicity m m' and concatenated degree rows.
    """
    na, nb = a.half_dim, b.half_dim
    genera = a.genera + b.genera
    if mode == "doubling":
        ell = a.dim_v + b.dim_v
        zero_a, zero_b = (0,) * a.dim_v, (0,) * b.dim_v
        weights = [w + zero_b for w in a.weights] + [zero_a + w for w in b.weights]
        degrees = [d + (0,) * nb for d in a.degrees] + [(0,) * na + d for d in b.degrees]
        mults = a.multiplicities + b.multiplicities
        periods = None
        if a.periods is not None and b.periods is not None:
            periods = PeriodData(ell, tuple(p + zero_b for p in a.periods.periods)
                                 + tuple(zero_a + p for p in b.periods.periods))
        return ManifoldPresentation(ell, tuple(weights), tuple(degrees), genera, periods, mults)
    if mode != "same_v":
        raise ValueError(f"unknown product mode {mode!r}")
    if a.dim_v != b.dim_v:
        raise ConventionMismatch("same-V product needs a common V")
    bmap = {w: (d, m) for w, d, m in zip(b.weights, b.degrees, b.multiplicities)}
    weights, degrees, mults = [], [], []
    for w, d, m in zip(a.weights, a.degrees, a.multiplicities):
        if w in bmap:
            d2, m2 = bmap[w]
            weights.append(w)
            degrees.append(d + d2)
            mults.append(m * m2)
    if not weights:
        raise NotPrequantizable("no common weights")
    periods = None
    if a.periods is not None and b.periods is not None:
        periods = PeriodData(a.dim_v, a.periods.periods + b.periods.periods)
    return ManifoldPresentation(a.dim_v, tuple(weights), tuple(degrees), genera, periods, tuple(mults))


def restrict_to_diagonal(model: ManifoldPresentation, copies: int) -> ManifoldPresentation:
    """Pull back along M -> M^copies; factor classes of the copies add up."""
    n = model.half_dim
    if n % copies:
        raise ValueError("factor count is not a multiple of the number of copies")
    m = n // copies
    genera = model.genera[:m]
    if any(model.genera[c * m:(c + 1) * m] != genera for c in range(copies)):
        raise ConventionMismatch("copies have different factors")
    degrees = tuple(tuple(sum(r[c * m + j] for c in range(copies)) for j in range(m)) for r in model.degrees)
    periods = None
    if model.periods is not None:
        ps = model.periods.periods
        periods = PeriodData(model.dim_v, tuple(
            tuple(sum(ps[c * m + j][i] for c in range(copies)) for i in range(model.dim_v)) for j in range(m)))
    return ManifoldPresentation(model.dim_v, model.weights, degrees, genera, periods, model.multiplicities)


def tensor_power(model: ManifoldPresentation, k: int) -> ManifoldPresentation:
    """E^{⊗k} over (M, kω): k-fold same-V product restricted to the diagonal.

    Multiplicities become m^k, so only minimal-rank models keep their rank.
    """
    if k < 1:
        raise ValueError("k must be positive")
    out = model
    for _ in range(k - 1):
        out = product_model(out, model, "same_v")
    return restrict_to_diagonal(out, k)
