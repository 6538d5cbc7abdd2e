"""Linear V-valued symplectic forms.

A form on U = Q^n with values in V = Q^l is stored as l skew matrices; component
``j`` evaluates as ``omega_j(x, y) = x^T Omega_j y``. Everything here is exact
over Q (or Q(i) after complexification); floats appear only in the optional
eigenvalue report of :func:`definiteness_report`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import comb
from typing import Sequence

import numpy as np

from . import linalg as la
from .linalg import GaussRational, I


class NotSkew(ValueError):
    def __init__(self, component: int, msg: str | None = None):
        self.component = component
        super().__init__(msg or f"omega component {component} is not skew-symmetric")


class JacobiViolation(ValueError):
    pass


class DegenerateCenter(ValueError):
    pass


class NotHamiltonian(ValueError):
    def __init__(self, component: int):
        self.component = component
        super().__init__(f"df is not in the image of iota omega (first failing component {component})")


class NotCompatible(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def _sign(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@dataclass(frozen=True)
class VSymplecticSpace:
    dim_u: int
    dim_v: int
    omega: tuple  # tuple of dim_v matrices (tuples of tuples of Fraction)
    canonical: tuple[int, int] | None = None  # (dim_q, dim_v) for U + Hom(U, V)

    def __post_init__(self):
        om = tuple(tuple(tuple(la.frac(x) for x in row) for row in m) for m in self.omega)
        object.__setattr__(self, "omega", om)
        if self.dim_u < 1 or self.dim_v < 1:
            raise ValueError("dimensions must be positive")
        if len(om) != self.dim_v:
            raise ValueError(f"expected {self.dim_v} components, got {len(om)}")
        for j, m in enumerate(om):
            if len(m) != self.dim_u or any(len(r) != self.dim_u for r in m):
                raise ValueError(f"component {j} is not {self.dim_u}x{self.dim_u}")
            for a in range(self.dim_u):
                for b in range(a, self.dim_u):
                    if m[a][b] != -m[b][a]:
                        raise NotSkew(j)

    def __call__(self, x, y):
        """omega(x, y) as a vector in V (bilinear, no conjugation)."""
        return [sum((xa * m[a][b] * y[b] for a, xa in enumerate(x) if xa != 0 for b in range(self.dim_u)), Fraction(0))
                for m in self.omega]

    def component(self, weight: Sequence) -> list[list]:
        """Matrix of the scalar form lambda o omega."""
        n = self.dim_u
        return [[sum((w * m[a][b] for w, m in zip(weight, self.omega)), Fraction(0)) for b in range(n)]
                for a in range(n)]

    @cached_property
    def joint_kernel(self) -> list[list[Fraction]]:
        rows = [list(row) for m in self.omega for row in m]
        return la.nullspace(rows, self.dim_u)

    @property
    def nondegenerate(self) -> bool:
        return not self.joint_kernel


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(v) for v in self.basis)
        object.__setattr__(self, "basis", b)
        if any(len(v) != self.ambient_dim for v in b):
            raise ValueError("basis vector has wrong length")
        if b and la.rank([list(v) for v in b], self.ambient_dim) != len(b):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def same_as(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and la.span_equal(
            [list(v) for v in self.basis], [list(v) for v in other.basis], self.ambient_dim)

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Subspace":
        vs = [list(v) for v in vectors if not la.is_zero_vector(v)]
        if not vs:
            return cls(ambient_dim, ())
        r, _ = la.rref(vs, ambient_dim)
        return cls(ambient_dim, tuple(tuple(row) for row in r))


@dataclass(frozen=True)
class LinearObservable:
    """Affine V-valued function f(x) = value_at_origin + differential @ x."""

    value_at_origin: tuple
    differential: tuple  # dim_v rows of length dim_u

    def __post_init__(self):
        object.__setattr__(self, "value_at_origin", tuple(la.frac(x) for x in self.value_at_origin))
        object.__setattr__(self, "differential",
                           tuple(tuple(la.frac(x) for x in row) for row in self.differential))
        if len(self.differential) != len(self.value_at_origin):
            raise ValueError("differential must have one row per V-coordinate")

    def __call__(self, x):
        return [c + la.dot(row, x) for c, row in zip(self.value_at_origin, self.differential)]

    @classmethod
    def constant(cls, v, dim_u: int) -> "LinearObservable":
        return cls(tuple(v), tuple((0,) * dim_u for _ in v))

    @classmethod
    def coordinate(cls, index: int, v, dim_u: int) -> "LinearObservable":
        """The observable x -> x[index] * v."""
        return cls((0,) * len(v), tuple(tuple(c if a == index else 0 for a in range(dim_u)) for c in v))


@dataclass(frozen=True)
class ComplexStructureJ:
    j: tuple

    def __post_init__(self):
        rows = tuple(tuple(x if isinstance(x, float) else la.frac(x) for x in row) for row in self.j)
        object.__setattr__(self, "j", rows)
        n = len(rows)
        if self.exact:
            sq = la.matmul([list(r) for r in rows], [list(r) for r in rows])
            if sq != [[Fraction(-int(a == b)) for b in range(n)] for a in range(n)]:
                raise ValueError("J^2 != -1")
        else:
            a = self.array
            if not np.allclose(a @ a, -np.eye(n), atol=1e-12, rtol=0):
                raise ValueError("J^2 != -1 within 1e-12")

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.j for x in row)

    @property
    def array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.j])

    @property
    def matrix(self):
        return [list(r) for r in self.j]


# --- model constructions -------------------------------------------------

def make_canonical_model(dim_q: int, dim_v: int) -> VSymplecticSpace:
    """U + Hom(U, V) with (u+phi, u'+phi') -> phi'(u) - phi(u').

    Coordinates: q_0..q_{k-1}, then p_{a,b} (a-major) with phi(e_a) = sum_b p_{a,b} f_b.
    """
    if dim_q < 1 or dim_v < 1:
        raise ValueError("dimensions must be positive")
    k, ell = dim_q, dim_v
    n = k + k * ell
    comps = []
    for b in range(ell):
        m = la.zeros(n, n)
        for a in range(k):
            p = k + a * ell + b
            m[a][p] = Fraction(1)
            m[p][a] = Fraction(-1)
        comps.append(m)
    space = VSymplecticSpace(n, ell, comps, canonical=(k, ell))
    assert space.nondegenerate
    return space


def symplectic_plane() -> VSymplecticSpace:
    return make_canonical_model(1, 1)


def make_lie_model(structure_constants) -> VSymplecticSpace:
    """Lie algebra g as a g-valued form: omega_k(e_i, e_j) = c[i][j][k]."""
    c = [[[la.frac(x) for x in cij] for cij in ci] for ci in structure_constants]
    n = len(c)
    if any(len(ci) != n or any(len(cij) != n for cij in ci) for ci in c):
        raise ValueError("structure constants must be n x n x n")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    raise NotSkew(k, f"c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]")
    # [[e_i,e_j],e_l] + cyclic = 0
    for i, j, l in combinations(range(n), 3):
        for m in range(n):
            s = Fraction(0)
            for a, b, d in ((i, j, l), (j, l, i), (l, i, j)):
                s += sum(c[a][b][p] * c[p][d][m] for p in range(n))
            if s != 0:
                raise JacobiViolation(f"Jacobi fails on (e{i}, e{j}, e{l}), coordinate {m}")
    comps = [[[c[i][j][k] for j in range(n)] for i in range(n)] for k in range(n)]
    return VSymplecticSpace(n, n, comps)


def require_nondegenerate(space: VSymplecticSpace) -> VSymplecticSpace:
    if not space.nondegenerate:
        raise DegenerateCenter(f"joint kernel has dimension {len(space.joint_kernel)}")
    return space


def su2_structure_constants():
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for p in permutations(range(3)):
        eps[p[0]][p[1]][p[2]] = _sign(p)
    return eps


def heisenberg_structure_constants():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = 1, -1
    return c


# --- checks and solves ----------------------------------------------------

def is_nondegenerate(space: VSymplecticSpace):
    """(True, None) or (False, nonzero joint-kernel vector)."""
    ker = space.joint_kernel
    return (False, ker[0]) if ker else (True, None)


def poly_orthogonal(w: Subspace, space: VSymplecticSpace) -> Subspace:
    """{u : omega(u, w) = 0 in V for all w in W}; complex W gives the bilinear extension."""
    if w.ambient_dim != space.dim_u:
        raise ValueError("ambient dimension mismatch")
    rows = [la.matvec([list(r) for r in m], list(vec)) for m in space.omega for vec in w.basis]
    return Subspace(space.dim_u, tuple(tuple(v) for v in la.nullspace(rows, space.dim_u)))


def is_lagrangian(w: Subspace, space: VSymplecticSpace) -> bool:
    return poly_orthogonal(w, space).same_as(w)


def _omega_stack(space: VSymplecticSpace):
    return [list(row) for m in space.omega for row in m]


def hamiltonian_solve(f: LinearObservable, space: VSymplecticSpace):
    """X with omega(X, .) = -df, i.e. Omega_j X = grad f_j for every component j."""
    n = space.dim_u
    if len(f.differential) != space.dim_v or any(len(r) != n for r in f.differential):
        raise ValueError("observable shape does not match the space")
    rows, rhs = [], []
    for j, (m, grad) in enumerate(zip(space.omega, f.differential)):
        rows.extend(list(r) for r in m)
        rhs.extend(grad)
        if la.solve(rows, rhs) is None:
            raise NotHamiltonian(j)
    # unique when nondegenerate; otherwise the rref particular solution (free coordinates zero)
    return la.solve(rows, rhs)


def bracket(f: LinearObservable, h: LinearObservable, space: VSymplecticSpace):
    """{f, h} = omega(X_f, X_h) in V; cross-checked against X_f h."""
    xf = hamiltonian_solve(f, space)
    xh = hamiltonian_solve(h, space)
    val = space(xf, xh)
    directional = [la.dot(row, xf) for row in h.differential]
    if val != directional:
        raise AssertionError("omega(X_f, X_h) != X_f h")
    return val


def compatible_complex_check(j: ComplexStructureJ, space: VSymplecticSpace) -> bool:
    n = space.dim_u
    if len(j.j) != n:
        raise ValueError("dimension mismatch")
    if j.exact:
        jm = j.matrix
        sq = la.matmul(jm, jm)
        if sq != [[Fraction(-int(a == b)) for b in range(n)] for a in range(n)]:
            return False
        jt = la.transpose(jm)
        return all(la.matmul(la.matmul(jt, [list(r) for r in m]), jm) == [list(r) for r in m]
                   for m in space.omega)
    a = j.array
    if not np.allclose(a @ a, -np.eye(n), atol=1e-12, rtol=0):
        return False
    for m in space.omega:
        om = np.array([[float(x) for x in r] for r in m])
        if not np.allclose(a.T @ om @ a, om, atol=1e-12, rtol=0):
            return False
    return True


def eigenspace_split(j: ComplexStructureJ, space: VSymplecticSpace):
    """(U_+, U_-): the +i and -i eigenspaces of J in U tensor C, exact over Q(i)."""
    if not j.exact:
        raise TypeError("eigenspace_split needs a rational J")
    if not compatible_complex_check(j, space):
        raise NotCompatible("J is not a compatible complex structure")
    n = space.dim_u
    out = []
    for eig in (I, -I):
        rows = [[GaussRational(x) - (eig if a == b else 0) for b, x in enumerate(row)] for a, row in enumerate(j.j)]
        out.append(Subspace(n, tuple(tuple(v) for v in la.nullspace(rows, n))))
    plus, minus = out
    assert plus.dim == minus.dim == n // 2
    return plus, minus


def standard_complex_structure(n_pairs: int) -> ComplexStructureJ:
    """J e_{q_a} = e_{p_a}, J e_{p_a} = -e_{q_a} on Q^{2n} ordered (q_0, p_0, q_1, p_1, ...)."""
    n = 2 * n_pairs
    m = la.zeros(n, n)
    for a in range(n_pairs):
        m[2 * a + 1][2 * a] = Fraction(1)
        m[2 * a][2 * a + 1] = Fraction(-1)
    return ComplexStructureJ(m)


def canonical_complex_structure(j_u: ComplexStructureJ, dim_v: int) -> ComplexStructureJ:
    """J_U + (J_U^{-1})^* on U + Hom(U, V): phi -> phi o J_U^{-1}."""
    k = len(j_u.j)
    ju = j_u.matrix
    jinv_t = la.transpose(la.inverse(ju))
    n = k + k * dim_v
    m = la.zeros(n, n)
    for a in range(k):
        for c in range(k):
            m[a][c] = ju[a][c]
    # new p_{a,b} = sum_c (J^{-1})_{c,a} p_{c,b}
    for a in range(k):
        for c in range(k):
            for b in range(dim_v):
                m[k + a * dim_v + b][k + c * dim_v + b] = jinv_t[a][c]
    return ComplexStructureJ(m)


def plane_product(n_pairs: int) -> VSymplecticSpace:
    """(R^2)^n with the sum of standard area forms, coordinates (q_0, p_0, q_1, p_1, ...)."""
    n = 2 * n_pairs
    m = la.zeros(n, n)
    for a in range(n_pairs):
        m[2 * a][2 * a + 1] = Fraction(1)
        m[2 * a + 1][2 * a] = Fraction(-1)
    return VSymplecticSpace(n, 1, [m])


@dataclass
class WeightVerdict:
    weight: tuple
    inertia: tuple[int, int, int]
    verdict: str
    eigenvalues: list[float]
    eigenspace_verdict_plus: str
    eigenspace_verdict_minus: str

    @property
    def definite(self) -> bool:
        return self.verdict in ("positive-definite", "negative-definite")

    @property
    def cross_check(self) -> bool:
        return self.verdict_agrees(self.eigenspace_verdict_plus) and self.verdict_agrees(self.eigenspace_verdict_minus)

    def verdict_agrees(self, other: str) -> bool:
        if self.definite:
            return other == self.verdict
        return other not in ("positive-definite", "negative-definite")


@dataclass
class DefinitenessReport:
    per_weight: list[WeightVerdict] = field(default_factory=list)

    @property
    def definite(self) -> bool:
        return bool(self.per_weight) and all(w.definite for w in self.per_weight)

    @property
    def positive(self) -> bool:
        return all(w.inertia[1] == 0 for w in self.per_weight)

    @property
    def cross_check(self) -> bool:
        return all(w.cross_check for w in self.per_weight)


def _classify(plus: int, minus: int, zero: int) -> str:
    if plus and minus:
        return "indefinite"
    if zero:
        return "degenerate"
    return "positive-definite" if plus else "negative-definite"


def _float_inertia(g: np.ndarray, tol: float = 1e-9):
    ev = np.linalg.eigvalsh(g)
    if np.any(np.abs(ev) < tol):
        return None, list(map(float, ev))
    return (int((ev > 0).sum()), int((ev < 0).sum()), 0), list(map(float, ev))


def definiteness_report(j: ComplexStructureJ, space: VSymplecticSpace, weights) -> DefinitenessReport:
    """Per-weight signature of <u, u'>_lambda = omega_lambda(u, J u'), and the
    eigenspace cross-check on the Hermitian forms u -> -+i omega_lambda(u, conj u) on U_+-."""
    if not compatible_complex_check(j, space):
        raise NotCompatible("J is not a compatible complex structure")
    report = DefinitenessReport()
    n = space.dim_u
    if j.exact:
        plus_sp, minus_sp = eigenspace_split(j, space)
    for wt in weights:
        wt = tuple(la.frac(x) for x in wt)
        om = space.component(wt)
        if j.exact:
            g = la.matmul(om, j.matrix)
        else:
            g = (np.array([[float(x) for x in r] for r in om]) @ j.array)
        if j.exact:
            if any(g[a][b] != g[b][a] for a in range(n) for b in range(n)):
                raise NotSymmetric("omega(u, Ju') is not symmetric")
            inert = la.inertia(g)
            ev = list(map(float, np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in g]))))
        else:
            if not np.allclose(g, g.T, atol=1e-9, rtol=0):
                raise NotSymmetric("omega(u, Ju') is not symmetric")
            inert, ev = _float_inertia((g + g.T) / 2)
            if inert is None:  # near-zero eigenvalue: decide over Q
                gq = [[Fraction(float(x)) for x in r] for r in (g + g.T) / 2]
                inert = la.inertia(gq)
        verdict = _classify(*inert)
        if j.exact:
            vp = _hermitian_verdict(plus_sp, om, -I)
            vm = _hermitian_verdict(minus_sp, om, I)
        else:
            vp = vm = _float_eigenspace_verdicts(j.array, np.array([[float(x) for x in r] for r in om]))
        report.per_weight.append(WeightVerdict(wt, inert, verdict, ev, vp, vm))
    return report


def _hermitian_verdict(sub: Subspace, om, factor) -> str:
    basis = [list(v) for v in sub.basis]
    om_conj = [la.matvec(om, [la.conj(x) for x in y]) for y in basis]
    h = [[factor * la.dot(bx, oy) for oy in om_conj] for bx in basis]
    return _classify(*la.inertia(h))


def _float_eigenspace_verdicts(j: np.ndarray, om: np.ndarray) -> str:
    w, v = np.linalg.eig(j)
    plus = v[:, np.abs(w - 1j) < 1e-6]
    h = -1j * (plus.T @ om @ plus.conj())
    ev = np.linalg.eigvalsh((h + h.conj().T) / 2)
    tol = 1e-9
    pos, neg, zero = int((ev > tol).sum()), int((ev < -tol).sum()), int((np.abs(ev) <= tol).sum())
    return _classify(pos, neg, zero)


def scaling_determinant(alpha, dim_u: int, dim_v: int) -> Fraction:
    """Determinant of (u + phi) -> (alpha u + phi / alpha) on U + Hom(U, V)."""
    alpha = la.frac(alpha)
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    space = make_canonical_model(dim_u, dim_v)
    n = space.dim_u
    t = [[(alpha if a < dim_u else 1 / alpha) if a == b else Fraction(0) for b in range(n)] for a in range(n)]
    tt = la.transpose(t)
    for m in space.omega:
        mm = [list(r) for r in m]
        if la.matmul(la.matmul(tt, mm), t) != mm:
            raise AssertionError("scaling map is not a V-symplectomorphism")
    d = la.det(t)
    if d != alpha ** (dim_u * (1 - dim_v)):
        raise AssertionError("determinant disagrees with alpha^(dim U (1 - dim V))")
    return d


def alternating_form(n: int, terms: dict):
    """Full coefficient table of sum c * dx_{i1} ^ ... ^ dx_{im} on Q^n.

    Convention: (dx_1 ^ ... ^ dx_m)(e_1, ..., e_m) = 1.
    """
    degree = None
    table = {}
    for idx, c in terms.items():
        idx = tuple(idx)
        if degree is None:
            degree = len(idx)
        if len(idx) != degree or len(set(idx)) != degree or any(not 0 <= i < n for i in idx):
            raise ValueError(f"bad index tuple {idx}")
        c = la.frac(c)
        for p in permutations(range(degree)):
            key = tuple(idx[i] for i in p)
            table[key] = table.get(key, Fraction(0)) + _sign(p) * c
    return degree, table


def symbol_map(n: int, terms: dict) -> VSymplecticSpace:
    """(X, Y) -> iota_Y iota_X Omega, valued in (k-1)-forms with basis dx_I, I increasing."""
    degree, table = alternating_form(n, terms)
    if degree is None or degree < 2:
        raise ValueError("need a form of degree k+1 >= 2")
    tail = list(combinations(range(n), degree - 2))
    comps = []
    for idx in tail:
        m = [[table.get((a, b) + idx, Fraction(0)) for b in range(n)] for a in range(n)]
        comps.append(m)
    assert len(comps) == comb(n, degree - 2)
    return VSymplecticSpace(n, len(comps), comps)


def symbol_tail_basis(n: int, k: int):
    return list(combinations(range(n), k - 1))


def moment_map_linear(space: VSymplecticSpace, action, phi):
    """xi -> phi(xi_Q) for a linear action with fundamental fields xi_Q in U.

    ``phi`` is a dim_q x dim_v matrix with row a = phi(e_a).
    """
    if space.canonical is None:
        raise ValueError("moment map is defined here for canonical models only")
    k, ell = space.canonical
    phi = [[la.frac(x) for x in row] for row in phi]
    if len(phi) != k or any(len(r) != ell for r in phi):
        raise ValueError("phi must be dim_q x dim_v")
    out = []
    for xi in action:
        xi = [la.frac(x) for x in xi]
        out.append([sum((xi[a] * phi[a][b] for a in range(k)), Fraction(0)) for b in range(ell)])
    return out


def moment_observable(space: VSymplecticSpace, xi) -> LinearObservable:
    """The linear function (u, phi) -> phi(xi) on a canonical model."""
    k, ell = space.canonical
    diff = []
    for b in range(ell):
        row = [Fraction(0)] * space.dim_u
        for a in range(k):
            row[k + a * ell + b] = la.frac(xi[a])
        diff.append(row)
    return LinearObservable((0,) * ell, diff)
