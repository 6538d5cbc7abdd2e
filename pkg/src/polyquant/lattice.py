"""Rational lattices in V = Q^l: Hermite normal form, containment, period
lattices and the minimal-rank classification by dual bases.

Weights produced here are rational multiples of the symbolic unit 2πi.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import linalg as la
from .reps import WeightSet


class NotFull(ValueError):
    pass


class NotFullRank(ValueError):
    def __init__(self, lattice: "RationalLattice", witness: "RationalLattice"):
        self.lattice = lattice
        self.witness = witness
        super().__init__(f"period lattice has rank {lattice.rank} < {lattice.dim_v}")


class NotABasis(ValueError):
    pass


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x a + y b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_integer(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row Hermite normal form of the Z-span of integer rows.

    Echelon shape, positive pivots, entries above each pivot reduced into [0, pivot).
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    pr = 0
    for col in range(ncols):
        if pr == len(a):
            break
        for i in range(pr + 1, len(a)):
            if a[i][col] == 0:
                continue
            p, q = a[pr][col], a[i][col]
            g, x, y = ext_gcd(p, q)
            rp, ri = a[pr], a[i]
            a[pr] = [x * u + y * v for u, v in zip(rp, ri)]
            a[i] = [(-q // g) * u + (p // g) * v for u, v in zip(rp, ri)]
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-u for u in a[pr]]
        piv = a[pr][col]
        for k in range(pr):
            t = a[k][col] // piv
            if t:
                a[k] = [u - t * v for u, v in zip(a[k], a[pr])]
        pr += 1
        a = a[:pr] + [r for r in a[pr:] if any(r)]
    return [r for r in a[:pr] if any(r)]


def hnf_rational(vectors: Sequence[Sequence], dim_v: int) -> list[list[Fraction]]:
    vs = [[la.frac(x) for x in v] for v in vectors]
    if any(len(v) != dim_v for v in vs):
        raise ValueError(f"vectors must have length {dim_v}")
    den = 1
    for v in vs:
        for x in v:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in v] for v in vs]
    return [[Fraction(x, den) for x in r] for r in hnf_integer(ints, dim_v)]


@dataclass(frozen=True)
class RationalLattice:
    """Z-span of rational vectors, stored by its row Hermite normal form."""

    dim_v: int
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(r) for r in hnf_rational(self.basis, self.dim_v))
        object.__setattr__(self, "basis", b)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def full(self) -> bool:
        return self.rank == self.dim_v

    def coordinates(self, v) -> list[int] | None:
        """Integer coefficients of v in the HNF basis, or None if v is not in the lattice."""
        v = [la.frac(x) for x in v]
        coeffs = []
        rest = list(v)
        for row in self.basis:
            piv = next(i for i, x in enumerate(row) if x != 0)
            c = rest[piv] / row[piv]
            if c.denominator != 1:
                return None
            coeffs.append(int(c))
            rest = [x - c * y for x, y in zip(rest, row)]
        if any(x != 0 for x in rest):
            return None
        return coeffs

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "RationalLattice") -> bool:
        return all(row in self for row in other.basis)

    @classmethod
    def standard(cls, dim_v: int) -> "RationalLattice":
        return cls(dim_v, tuple(tuple(int(i == j) for i in range(dim_v)) for j in range(dim_v)))


@dataclass(frozen=True)
class PeriodData:
    """Values of the form on a basis of H_2 (vectors in V)."""

    dim_v: int
    periods: tuple = ()

    def __post_init__(self):
        ps = tuple(tuple(la.frac(x) for x in p) for p in self.periods)
        if any(len(p) != self.dim_v for p in ps):
            raise ValueError(f"periods must have length {self.dim_v}")
        object.__setattr__(self, "periods", ps)


def span_lattice(periods: PeriodData) -> RationalLattice:
    return RationalLattice(periods.dim_v, periods.periods)


def is_prequantum_lattice(lattice: RationalLattice, periods: PeriodData) -> bool:
    if not lattice.full:
        raise NotFull("prequantum lattices are full by definition")
    return all(p in lattice for p in periods.periods)


def complete_to_full(lattice: RationalLattice) -> RationalLattice:
    """A full lattice containing ``lattice``: add e_j at every non-pivot column."""
    pivots = {next(i for i, x in enumerate(r) if x != 0) for r in lattice.basis}
    extra = [tuple(int(i == j) for i in range(lattice.dim_v)) for j in range(lattice.dim_v) if j not in pivots]
    return RationalLattice(lattice.dim_v, lattice.basis + tuple(extra))


def random_superlattice(lattice: RationalLattice, rng: random.Random, bound: int = 3) -> RationalLattice:
    """B' = M^{-1} B for a random nonsingular integer M, so that B = M B' lies in span(B')."""
    n = lattice.rank
    while True:
        m = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if la.det(m) != 0:
            break
    b = la.matmul(la.inverse(m), [list(r) for r in lattice.basis])
    return RationalLattice(lattice.dim_v, b)


def principal_lattice(periods: PeriodData, *, rng: random.Random | None = None,
                      witnesses: int = 10) -> RationalLattice:
    """I_omega, certified minimal by containment in random full prequantum superlattices."""
    lat = span_lattice(periods)
    if not lat.full:
        raise NotFullRank(lat, complete_to_full(lat))
    rng = rng or random.Random(0)
    for _ in range(witnesses):
        sup = random_superlattice(lat, rng)
        if not (is_prequantum_lattice(sup, periods) and sup.contains_lattice(lat)):
            raise AssertionError("principal lattice not contained in a prequantum superlattice")
    return lat


@dataclass
class QuantizabilityReport:
    quantizable: bool
    minimal_rank_prequantization: bool
    prequantum_lattice_exists: bool
    principal_is_prequantum: bool
    period_group_is_lattice: bool
    period_lattice: RationalLattice | None
    witness_lattice: RationalLattice | None
    notes: list[str] = field(default_factory=list)


def is_quantizable(periods: PeriodData, *, nonquantizable_by_fiat: bool = False) -> QuantizabilityReport:
    """The four equivalent existence conditions, evaluated on rational period data.

    A finitely generated subgroup of Q^l is always discrete, so rational data is
    always quantizable; ``nonquantizable_by_fiat`` marks a model whose true
    periods have irrational ratios (unrepresentable here).
    """
    if nonquantizable_by_fiat:
        return QuantizabilityReport(False, False, False, False, False, None, None,
                                    ["marked non-quantizable: periods with irrational ratios"])
    lat = span_lattice(periods)
    witness = lat if lat.full else complete_to_full(lat)
    notes = []
    if not lat.full:
        notes.append(f"period lattice has rank {lat.rank} < {lat.dim_v}: no full principal lattice; "
                     "any full lattice containing it is prequantum")
    if periods.periods == () or lat.rank == 0:
        notes.append("exact case: every full lattice is prequantum")
    return QuantizabilityReport(True, True, True, lat.full, True, lat, witness, notes)


def dual_basis(basis: Sequence[Sequence]) -> list[list[Fraction]]:
    b = [[la.frac(x) for x in r] for r in basis]
    n = len(b)
    if any(len(r) != n for r in b) or la.det(b) == 0:
        raise NotABasis("need dim V independent vectors")
    return la.transpose(la.inverse(b))


def classify_minimal(basis: Sequence[Sequence]) -> WeightSet:
    """Lattice basis B -> weights 2πi B* (dual basis)."""
    d = dual_basis(basis)
    return WeightSet(tuple(tuple(r) for r in d), (1,) * len(d), exact=True, unit="2πi")


def weights_to_lattice(weights: WeightSet) -> RationalLattice:
    """Weights 2πi B* -> the lattice spanned by B."""
    if weights.unit != "2πi" or not weights.exact:
        raise NotABasis("weights must be exact multiples of 2πi")
    ws = weights.expanded()
    b = dual_basis(ws)
    return RationalLattice(len(ws), tuple(tuple(r) for r in b))


def weights_to_basis(weights: WeightSet) -> list[list[Fraction]]:
    return dual_basis(weights.expanded())


def pairing_integral(weights: WeightSet, periods: PeriodData) -> bool:
    """<w, p> / 2πi is an integer for every weight and period."""
    if weights.unit != "2πi":
        raise ValueError("weights must be given in units of 2πi")
    return all(la.dot(w, p).denominator == 1 for w in weights.expanded() for p in periods.periods)
