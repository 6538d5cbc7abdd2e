import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import hermite_normal_form

from polyquant import linalg as la
from polyquant.lattice import (NotABasis, NotFull, NotFullRank, PeriodData, RationalLattice, classify_minimal,
                               complete_to_full, ext_gcd, hnf_integer, is_prequantum_lattice, is_quantizable,
                               pairing_integral, principal_lattice, random_superlattice, span_lattice,
                               weights_to_lattice)
from polyquant.reps import WeightSet

from strategies import unimodular

int_rows = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=4))


def sympy_lattice_columns(rows):
    """Basis of the row lattice from sympy's (column-style) Hermite normal form."""
    h = hermite_normal_form(sympy.Matrix(rows).T)
    return [[int(x) for x in h.col(j)] for j in range(h.cols) if any(h.col(j))]


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_ext_gcd(a, b):
    g, x, y = ext_gcd(a, b)
    assert g >= 0 and x * a + y * b == g
    if a or b:
        assert a % g == 0 and b % g == 0


@given(int_rows)
def test_hnf_shape(rows):
    h = hnf_integer(rows, len(rows[0]))
    pivots = [next(i for i, x in enumerate(r) if x) for r in h]
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for r, p in zip(h, pivots):
        assert r[p] > 0
    for k, (r, p) in enumerate(zip(h, pivots)):
        for above in h[:k]:
            assert 0 <= above[p] < r[p]


@given(int_rows)
def test_hnf_spans_same_lattice_as_sympy(rows):
    n = len(rows[0])
    if not any(any(r) for r in rows):
        assert hnf_integer(rows, n) == []
        return
    lat = RationalLattice(n, rows)
    cols = sympy_lattice_columns(rows)
    assert len(cols) == lat.rank
    assert all(c in lat for c in cols)
    theirs = sympy.Matrix(cols).T
    # coefficients of our basis in sympy's basis must be integers
    for r in lat.basis:
        sol, params = theirs.gauss_jordan_solve(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in r]))
        assert params.shape[0] == 0 and all(x.is_integer for x in sol)


@given(int_rows, st.randoms(use_true_random=False), st.data())
def test_hnf_invariant_under_recombination(rows, rnd, data):
    n = len(rows[0])
    u = data.draw(unimodular(len(rows)))
    mixed = la.matmul([[Fraction(x) for x in r] for r in u], [[Fraction(x) for x in r] for r in rows])
    shuffled = list(mixed)
    rnd.shuffle(shuffled)
    assert RationalLattice(n, rows).basis == RationalLattice(n, shuffled).basis


def test_span_examples():
    lat = span_lattice(PeriodData(2, ((2, 0), (3, 0), (0, 5))))
    assert lat.basis == ((1, 0), (0, 5)) and lat.full
    assert span_lattice(PeriodData(2, ())).rank == 0
    rank1 = span_lattice(PeriodData(2, ((1, 1),)))
    assert rank1.rank == 1 and not rank1.full


def test_rational_hnf():
    lat = RationalLattice(2, (("1/2", "1/2"), (1, 0)))
    assert lat.basis == ((Fraction(1, 2), Fraction(1, 2)), (0, 1))


def test_prequantum_examples():
    periods = PeriodData(2, ((1, 0), (0, 5)))
    assert is_prequantum_lattice(RationalLattice.standard(2), periods)
    assert not is_prequantum_lattice(RationalLattice(2, ((2, 0), (0, 2))), PeriodData(2, ((1, 0),)))
    half = RationalLattice(2, ((1, 0), ("1/2", "1/2")))
    assert is_prequantum_lattice(half, PeriodData(2, ((0, 5),)))
    assert half.coordinates((0, 5)) is not None
    with pytest.raises(NotFull):
        is_prequantum_lattice(RationalLattice(2, ((1, 0),)), periods)


def test_membership_solution():
    half = RationalLattice(2, ((1, 0), ("1/2", "1/2")))
    # the HNF basis is ((1/2, 1/2), (0, 1)); check the coefficients reproduce the vector
    c = half.coordinates((0, 5))
    v = [sum(ci * b[j] for ci, b in zip(c, half.basis)) for j in range(2)]
    assert v == [0, 5]


def test_principal_examples():
    assert principal_lattice(PeriodData(2, ((1, 0), (0, 5)))).basis == ((1, 0), (0, 5))
    assert principal_lattice(PeriodData(1, ((3,),))).basis == ((3,),)
    with pytest.raises(NotFullRank) as ei:
        principal_lattice(PeriodData(2, ()))
    assert ei.value.witness == RationalLattice.standard(2)


def test_complete_to_full_contains_original():
    lat = RationalLattice(3, ((2, 4, 0),))
    full = complete_to_full(lat)
    assert full.full and full.contains_lattice(lat)


def test_quantizable_reports():
    q = is_quantizable(PeriodData(2, ((1, 0), (0, 1))))
    assert q.quantizable and q.minimal_rank_prequantization and q.principal_is_prequantum
    exact = is_quantizable(PeriodData(2, ()))
    assert exact.quantizable and exact.witness_lattice.full
    deficient = is_quantizable(PeriodData(2, ((1, 1), (2, 2))))
    assert deficient.quantizable and not deficient.principal_is_prequantum
    fiat = is_quantizable(PeriodData(1, ((1,),)), nonquantizable_by_fiat=True)
    assert not fiat.quantizable


def test_classify_examples():
    ws = classify_minimal([(1, 0), (0, 1)])
    assert ws.unit == "2πi" and ws.weights == ((1, 0), (0, 1))
    ws = classify_minimal([(2, 0), (1, 1)])
    assert ws.weights == ((Fraction(1, 2), Fraction(-1, 2)), (0, 1))
    with pytest.raises(NotABasis):
        classify_minimal([(1, 1), (2, 2)])
    with pytest.raises(NotABasis):
        weights_to_lattice(WeightSet(((1.0,),), (1,), exact=False, unit="i"))


@settings(max_examples=30)
@given(st.integers(1, 3), st.data())
def test_classify_round_trip(n, data):
    while True:
        b = [[Fraction(data.draw(st.integers(-4, 4)), data.draw(st.integers(1, 3))) for _ in range(n)]
             for _ in range(n)]
        if la.det(b) != 0:
            break
    u = data.draw(unimodular(n))
    b2 = la.matmul([[Fraction(x) for x in r] for r in u], b)
    original = RationalLattice(n, b)
    assert weights_to_lattice(classify_minimal(b2)) == original
    # pairing of weights with the basis is the identity: integral on any sublattice
    periods = PeriodData(n, tuple(tuple(r) for r in b2))
    assert pairing_integral(classify_minimal(b2), periods)


def test_pairing_fails_outside_lattice():
    ws = classify_minimal([(2, 0), (0, 2)])
    assert not pairing_integral(ws, PeriodData(2, ((1, 0),)))


@given(st.integers(0, 10**6))
def test_principal_inside_random_superlattices(seed):
    rnd = random.Random(seed)
    periods = PeriodData(2, ((rnd.randint(1, 6), rnd.randint(-3, 3)), (0, rnd.randint(1, 6))))
    p = principal_lattice(periods, rng=rnd)
    for _ in range(5):
        sup = random_superlattice(p, rnd)
        assert sup.contains_lattice(p) and is_prequantum_lattice(sup, periods)


@given(int_rows, int_rows)
def test_containment_antisymmetric(a, b):
    n = len(a[0])
    b = [r[:n] + [0] * (n - len(r)) for r in b]
    la_, lb = RationalLattice(n, a), RationalLattice(n, b)
    if la_.contains_lattice(lb) and lb.contains_lattice(la_):
        assert la_.basis == lb.basis
