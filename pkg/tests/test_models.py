from fractions import Fraction
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyquant.lattice import PeriodData
from polyquant.models import (ConventionMismatch, InconsistentDegrees, ManifoldPresentation, MonodromyPresentation,
                              NotPositive, WeightsNotPermuted, adapted_volume, compose, finite_difference,
                              growth_check, monodromy_weight_action, product_model, rr_index, rr_index_closed_form,
                              tensor_power)
from polyquant.reps import NotPrequantizable

line = ManifoldPresentation.from_degrees
degree_tables = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(1, 4), min_size=n, max_size=n), min_size=1, max_size=3))


def test_volume_examples():
    assert adapted_volume(line([[3]])) == 3
    assert adapted_volume(line([[1, 2]])) == 2
    assert adapted_volume(line([[1, 2], [2, 1]])) == 4


def test_rr_examples():
    assert rr_index(line([[3]]), 2) == 7
    assert rr_index(line([[2, 2]]), 1) == 9
    assert all(rr_index(line([[0]]), k) == 1 for k in range(1, 6))


def test_growth_line():
    r = growth_check(line([[3]]), range(1, 5))
    assert r.dims == [4, 7, 10, 13] and r.leading == 3 == r.volume and r.matches


def test_growth_two_lines():
    r = growth_check(line([[1, 2]]), range(1, 6))
    assert r.dims == [(k + 1) * (2 * k + 1) for k in range(1, 6)]
    assert r.leading == 2 and r.matches


def test_growth_rejects_bad_models():
    with pytest.raises(NotPositive):
        growth_check(ManifoldPresentation(1, (), (), (0,)), range(1, 4))
    with pytest.raises(NotPositive):
        growth_check(line([[0]]), range(1, 4))
    with pytest.raises(ValueError):
        growth_check(line([[1, 1]]), [1, 2])


def test_positive_genus_is_an_index():
    curve = ManifoldPresentation.from_degrees([[3]], genera=[2])
    assert [rr_index(curve, k) for k in (1, 2, 3)] == [2, 5, 8]
    assert any("genus" in n for n in growth_check(curve, range(1, 4)).notes)


@given(degree_tables)
def test_volume_additive_and_multiplicative(degs):
    m = line(degs)
    assert adapted_volume(m) == sum(adapted_volume(line([r])) for r in degs)
    for r in degs:
        assert adapted_volume(line([r])) == prod(adapted_volume(line([[d]])) for d in r)


@given(degree_tables, st.integers(1, 8))
def test_ring_index_matches_closed_form(degs, k):
    m = line(degs)
    assert rr_index(m, k) == rr_index_closed_form(m, k) == sum(prod(k * d + 1 for d in r) for r in degs)


@given(degree_tables, st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_leading_coefficient_is_volume(degs, genera):
    n = len(degs[0])
    m = ManifoldPresentation.from_degrees(degs, genera[:n])
    ks = range(1, n + 4)
    diffs = finite_difference([rr_index(m, k) for k in ks], n)
    assert len(set(diffs)) == 1
    assert Fraction(diffs[0], prod(range(1, n + 1))) == adapted_volume(m)
    assert growth_check(m, ks).matches


def test_inconsistent_degrees():
    with pytest.raises(InconsistentDegrees):
        ManifoldPresentation(1, ((1,),), ((3,),), (), PeriodData(1, ((2,),)))
    with pytest.raises(InconsistentDegrees):
        ManifoldPresentation(1, ((1,),), ((3,),), (), PeriodData(1, ((3,), (1,))))


def test_monodromy_examples():
    ident = MonodromyPresentation(2, (((1, 0), (0, 1)),), ((1, 0), (0, 1)))
    assert monodromy_weight_action(ident) == [(0, 1)]
    swap = MonodromyPresentation(2, (((0, 1), (1, 0)),), ((1, 0), (0, 1)))
    (p,) = monodromy_weight_action(swap)
    assert p == (1, 0) and compose(p, p) == (0, 1)
    with pytest.raises(WeightsNotPermuted):
        monodromy_weight_action(MonodromyPresentation(2, (((2, 0), (0, 2)),), ((1, 0), (0, 1))))


@given(st.permutations(range(4)))
def test_permutation_matrices_induce_their_permutation(perm):
    n = len(perm)
    tau = tuple(tuple(int(perm[j] == i) for j in range(n)) for i in range(n))
    weights = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
    (p,) = monodromy_weight_action(MonodromyPresentation(n, (tau,), weights))
    # tau e_j = e_perm[j], hence e_i* o tau^-1 = e_perm[i]*
    assert p == tuple(perm)
    if compose(tuple(perm), tuple(perm)) == tuple(range(n)):
        assert compose(p, p) == tuple(range(n))


def test_doubling_is_block_diagonal():
    out = product_model(line([[3]]), line([[5]]), "doubling")
    assert out.dim_v == 2 and out.degrees == ((3, 0), (0, 5))
    assert adapted_volume(out) == 0  # each weight has degree 0 on the other factor
    assert rr_index(out, 1) == 4 * 1 + 1 * 6


def test_same_v_products():
    a = line([[1], [2]])
    b = line([[3], [4]])
    out = product_model(a, b, "same_v")
    assert out.weights == a.weights and out.degrees == ((1, 3), (2, 4))
    assert out.multiplicities == (1, 1)
    c = ManifoldPresentation(2, ((1, 1),), ((1,),))
    with pytest.raises(NotPrequantizable):
        product_model(a, c, "same_v")
    with pytest.raises(ConventionMismatch):
        product_model(a, line([[1]]), "same_v")


@given(degree_tables, st.integers(1, 4))
def test_tensor_power_scales_degrees(degs, k):
    m = line(degs)
    out = tensor_power(m, k)
    assert out.weights == m.weights and out.multiplicities == m.multiplicities
    assert out.degrees == tuple(tuple(k * d for d in r) for r in degs)
    assert rr_index(out, 1) == rr_index(m, k)
