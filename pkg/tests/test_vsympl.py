from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from polyquant import linalg as la
from polyquant.linalg import GaussRational, I
from polyquant.vsympl import (ComplexStructureJ, DegenerateCenter, JacobiViolation, LinearObservable,
                              NotCompatible, NotHamiltonian, NotSkew, Subspace, VSymplecticSpace, bracket,
                              canonical_complex_structure, compatible_complex_check, definiteness_report,
                              eigenspace_split, hamiltonian_solve, heisenberg_structure_constants,
                              is_lagrangian, is_nondegenerate, make_canonical_model, make_lie_model,
                              moment_map_linear, moment_observable, plane_product, poly_orthogonal,
                              require_nondegenerate, scaling_determinant, standard_complex_structure,
                              su2_structure_constants, symbol_map, symplectic_plane)

from strategies import rationals


def e(i, n):
    return tuple(int(j == i) for j in range(n))


def random_complex_structure(draw, pairs):
    """S J0 S^{-1} with a random rational S."""
    n = 2 * pairs
    j0 = standard_complex_structure(pairs).matrix
    while True:
        s = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(n)]
        if la.det(s) != 0:
            break
    s = [[Fraction(x) for x in r] for r in s]
    return ComplexStructureJ(la.matmul(la.matmul(s, j0), la.inverse(s)))


# --- models ---------------------------------------------------------------------


def test_canonical_plane():
    sp = make_canonical_model(1, 1)
    assert sp.omega[0] == ((0, 1), (-1, 0))
    assert sp(e(0, 2), e(1, 2)) == [1]


def test_canonical_2_3():
    sp = make_canonical_model(2, 3)
    assert sp.dim_u == 8 and sp.dim_v == 3
    assert is_nondegenerate(sp) == (True, None)
    for m in sp.omega:
        assert to_sym(m) == -to_sym(m).T


def to_sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m])


def test_canonical_1_2_pairings():
    sp = make_canonical_model(1, 2)
    # coordinates q, p1, p2
    assert sp(e(0, 3), e(1, 3)) == [1, 0]
    assert sp(e(0, 3), e(2, 3)) == [0, 1]
    assert sp(e(1, 3), e(2, 3)) == [0, 0]


@pytest.mark.parametrize("k,ell", [(1, 1), (2, 1), (1, 3), (3, 2)])
def test_canonical_factors_lagrangian(k, ell):
    sp = make_canonical_model(k, ell)
    n = sp.dim_u
    u = Subspace(n, tuple(e(a, n) for a in range(k)))
    hom = Subspace(n, tuple(e(a, n) for a in range(k, n)))
    assert is_lagrangian(u, sp)
    assert is_lagrangian(hom, sp)


def test_su2_nondegenerate():
    assert make_lie_model(su2_structure_constants()).nondegenerate


def test_abelian_degenerate():
    sp = make_lie_model([[[0] * 2 for _ in range(2)] for _ in range(2)])
    assert not sp.nondegenerate
    with pytest.raises(DegenerateCenter):
        require_nondegenerate(sp)


def test_heisenberg_center():
    ok, cert = is_nondegenerate(make_lie_model(heisenberg_structure_constants()))
    assert not ok
    assert cert == [0, 0, 1]


def test_lie_model_rejects_bad_constants():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2] = 1  # not antisymmetric
    with pytest.raises(NotSkew):
        make_lie_model(c)
    # antisymmetric but Jacobi fails: [e0,e1]=e0, [e0,e2]=e1, [e1,e2]=e1 gives a nonzero cycle
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j, k, v) in [(0, 1, 0, 1), (0, 2, 1, 1), (1, 2, 1, 1)]:
        c[i][j][k], c[j][i][k] = v, -v
    with pytest.raises(JacobiViolation):
        make_lie_model(c)


def test_non_skew_component_index():
    with pytest.raises(NotSkew) as ei:
        VSymplecticSpace(2, 2, [[[0, 1], [-1, 0]], [[0, 1], [1, 0]]])
    assert ei.value.component == 1


# --- nondegeneracy and orthogonals ---------------------------------------------


def test_zero_form_certificate():
    ok, cert = is_nondegenerate(VSymplecticSpace(2, 1, [[[0, 0], [0, 0]]]))
    assert not ok and not la.is_zero_vector(cert)


def test_collective_nondegeneracy_on_r3():
    dxdy = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    dxdz = [[0, 0, 1], [0, 0, 0], [-1, 0, 0]]
    assert is_nondegenerate(VSymplecticSpace(3, 2, [dxdy, dxdz]))[0]


def test_poly_orthogonal_examples():
    plane = symplectic_plane()
    assert poly_orthogonal(Subspace(2, ()), plane).dim == 2
    assert poly_orthogonal(Subspace(2, (e(0, 2),)), plane).same_as(Subspace(2, (e(0, 2),)))
    sp = make_canonical_model(1, 2)
    assert poly_orthogonal(Subspace(3, (e(0, 3),)), sp).same_as(Subspace(3, (e(0, 3),)))
    assert not is_lagrangian(Subspace(2, (e(0, 2), e(1, 2))), plane)


# --- Hamiltonian solves and brackets ----------------------------------------------


def test_plane_hamiltonian_of_q():
    x = hamiltonian_solve(LinearObservable.coordinate(0, (1,), 2), symplectic_plane())
    assert x == [0, 1]


def test_plane_bracket_q_p():
    plane = symplectic_plane()
    q = LinearObservable.coordinate(0, (1,), 2)
    p = LinearObservable.coordinate(1, (1,), 2)
    assert bracket(q, p, plane) == [1]
    assert bracket(q, q, plane) == [0]


def test_constant_has_zero_field():
    sp = make_canonical_model(2, 2)
    assert la.is_zero_vector(hamiltonian_solve(LinearObservable.constant((3, 4), sp.dim_u), sp))


def test_canonical_1_2_solvability():
    sp = make_canonical_model(1, 2)
    # df = (dq, dq): X = -(e_p1 + e_p2) works in both components
    f = LinearObservable((0, 0), ((1, 0, 0), (1, 0, 0)))
    assert hamiltonian_solve(f, sp) is not None
    # df = (dp1, 0): component 0 forces X_q = -1, component 1 then needs X_q = 0
    g = LinearObservable((0, 0), ((0, 1, 0), (0, 0, 0)))
    with pytest.raises(NotHamiltonian) as ei:
        hamiltonian_solve(g, sp)
    assert ei.value.component == 1


def test_canonical_1_2_bracket_q_with_p():
    sp = make_canonical_model(1, 2)
    q = LinearObservable((0, 0), ((1, 0, 0), (0, 0, 0)))  # q e_1
    p = LinearObservable((0, 0), ((0, 1, 0), (0, 0, 1)))  # phi(e_q) = (p1, p2)
    assert bracket(q, p, sp) == [1, 0]


def _affine_hamiltonian(draw, sp):
    """Random combination of the fields' duals: f = omega(X, .) with X random, plus a constant."""
    n = sp.dim_u
    x = [draw(rationals) for _ in range(n)]
    diff = [[-sum((x[a] * m[a][b] for a in range(n)), Fraction(0)) for b in range(n)] for m in sp.omega]
    c = [draw(rationals) for _ in range(sp.dim_v)]
    return LinearObservable(tuple(c), tuple(tuple(r) for r in diff)), x


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_bracket_antisymmetric_and_unique(k, ell, data):
    sp = make_canonical_model(k, ell)
    f, xf = _affine_hamiltonian(data.draw, sp)
    h, _ = _affine_hamiltonian(data.draw, sp)
    # grad f_j = -Omega_j^T x = Omega_j x, so the unique solution is x itself
    assert hamiltonian_solve(f, sp) == [la.frac(v) for v in xf]
    assert hamiltonian_solve(f, sp) == hamiltonian_solve(f, sp)
    fh, hf = bracket(f, h, sp), bracket(h, f, sp)
    assert fh == [-x for x in hf]


# --- complex structures -----------------------------------------------------------


def test_standard_plane_structure():
    plane = symplectic_plane()
    j = standard_complex_structure(1)
    assert compatible_complex_check(j, plane)
    plus, minus = eigenspace_split(j, plane)
    assert plus.same_as(Subspace(2, ((GaussRational(1), -I),)))
    assert is_lagrangian(plus, plane) and is_lagrangian(minus, plane)


def test_identity_is_not_a_complex_structure():
    with pytest.raises(ValueError):
        ComplexStructureJ([[1, 0], [0, 1]])


def test_incompatible_structure_rejected():
    plane = plane_product(2)
    # the standard J conjugated by the shear q0 -> q0 + q1, which does not preserve the form
    j = ComplexStructureJ([[0, -1, 0, -1], [1, 0, -1, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    assert not compatible_complex_check(j, plane)
    with pytest.raises(NotCompatible):
        eigenspace_split(j, plane)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_canonical_structure_compatible_and_indefinite(ell):
    sp = make_canonical_model(2, ell)
    j = canonical_complex_structure(standard_complex_structure(1), ell)
    assert compatible_complex_check(j, sp)
    rep = definiteness_report(j, sp, [e(b, ell) for b in range(ell)])
    assert all(w.verdict == "indefinite" for w in rep.per_weight)
    assert rep.cross_check


def test_product_of_planes_eigenspaces():
    sp = plane_product(2)
    plus, minus = eigenspace_split(standard_complex_structure(2), sp)
    assert plus.dim == minus.dim == 2
    assert is_lagrangian(plus, sp)


def test_plane_definiteness_and_sign_flip():
    plane = symplectic_plane()
    j = standard_complex_structure(1)
    rep = definiteness_report(j, plane, [(1,)])
    assert rep.per_weight[0].verdict == "positive-definite"
    assert rep.cross_check and rep.definite and rep.positive
    neg = ComplexStructureJ([[-x for x in r] for r in j.matrix])
    rep2 = definiteness_report(neg, plane, [(1,)])
    assert rep2.per_weight[0].verdict == "negative-definite"
    assert rep2.cross_check


def test_float_structure_agrees_with_exact():
    plane = plane_product(2)
    jf = ComplexStructureJ([[float(x) for x in r] for r in standard_complex_structure(2).matrix])
    rep = definiteness_report(jf, plane, [(1,)])
    assert rep.per_weight[0].verdict == "positive-definite" and rep.cross_check


@given(st.sampled_from([(2, 1), (2, 2), (2, 3), (4, 1)]), st.data())
def test_random_compatible_structures(dims, data):
    k, ell = dims
    ju = random_complex_structure(data.draw, k // 2)
    sp = make_canonical_model(k, ell)
    j = canonical_complex_structure(ju, ell)
    assert compatible_complex_check(j, sp)
    plus, minus = eigenspace_split(j, sp)
    assert is_lagrangian(plus, sp) and is_lagrangian(minus, sp)
    weights = [e(b, ell) for b in range(ell)] + [tuple(data.draw(rationals) for _ in range(ell))]
    assert definiteness_report(j, sp, weights).cross_check


# --- scaling determinant, symbol map, moment maps -------------------------------------


@pytest.mark.parametrize("alpha,k,ell,expected", [
    (2, 2, 3, Fraction(1, 16)), (5, 3, 1, Fraction(1)), (3, 1, 2, Fraction(1, 3))])
def test_scaling_determinant_examples(alpha, k, ell, expected):
    assert scaling_determinant(alpha, k, ell) == expected


def test_scaling_determinant_sympy_oracle():
    alpha = sympy.Rational(3, 2)
    k, ell = 2, 3
    d = sympy.diag(*([alpha] * k + [1 / alpha] * (k * ell))).det()
    assert scaling_determinant("3/2", k, ell) == Fraction(int(d.p), int(d.q))


def test_scaling_determinant_requires_alpha_above_one():
    with pytest.raises(ValueError):
        scaling_determinant(1, 2, 2)


def test_symbol_map_degree_two_is_identity():
    sp = symbol_map(2, {(0, 1): 1})
    assert sp.dim_v == 1 and sp.omega[0] == ((0, 1), (-1, 0))


def test_symbol_map_volume_form():
    sp = symbol_map(3, {(0, 1, 2): 1})
    # tail basis (dx, dy, dz) in order of increasing index
    assert sp(e(0, 3), e(1, 3)) == [0, 0, 1]
    assert sp(e(1, 2 + 1), e(2, 3)) == [1, 0, 0]


@given(rationals, st.data())
def test_symbol_map_bilinear_and_skew(a, data):
    sp = symbol_map(4, {(0, 1, 2): 1, (1, 2, 3): 2, (0, 1, 3): -1})
    x = [data.draw(rationals) for _ in range(4)]
    y = [data.draw(rationals) for _ in range(4)]
    assert sp([a * v for v in x], y) == [a * v for v in sp(x, y)]
    assert sp(x, y) == [-v for v in sp(y, x)]


def test_moment_map_examples():
    sp = make_canonical_model(1, 2)
    assert moment_map_linear(sp, [(1,)], [(2, 5)]) == [[2, 5]]
    assert moment_map_linear(sp, [(1,)], [(0, 0)]) == [[0, 0]]
    a = moment_map_linear(sp, [(3,)], [(1, 2)])
    b = moment_map_linear(sp, [(3,)], [(4, -1)])
    assert moment_map_linear(sp, [(3,)], [(5, 1)]) == [[x + y for x, y in zip(a[0], b[0])]]


def test_moment_observable_matches_moment_map():
    sp = make_canonical_model(2, 2)
    mu = moment_observable(sp, (1, 2))
    phi = [(1, 3), (2, -1)]
    point = [0, 0] + [x for row in phi for x in row]
    assert mu(point) == moment_map_linear(sp, [(1, 2)], phi)[0]
