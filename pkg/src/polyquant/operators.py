"""Prequantum operators Q_f = nabla_{X_f} + A_f on polynomial sections.

Sections of the trivial bundle M x C^r over a linear model are truncated to
polynomials of total degree <= degree_cap; monomials are indexed in graded-lex
order. The connection is nabla_X = L_X + A_{theta(X)} with theta the canonical
primitive sum_a p_{a,b} dq_a on U + Hom(U, V), or the symmetric primitive
theta_x(Y) = omega(Y, x) / 2 on any other constant form. Both satisfy
-d theta = omega.

Exact inputs are realized as integer sparse matrices over a common
denominator, so the defect [Q_f, Q_h] - Q_{f,h} is decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import lcm
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import linalg as la
from .linalg import GaussRational
from .reps import AbelianRep, DimensionMismatch
from .vsympl import LinearObservable, NotHamiltonian, VSymplecticSpace

Monomial = tuple  # exponent vector


class DegreeOverflow(ValueError):
    pass


# --- sparse polynomials: dict monomial -> coefficient ---------------------

def poly_add(p: dict, q: dict, c=1) -> dict:
    out = dict(p)
    for m, v in q.items():
        out[m] = out.get(m, 0) + c * v
        if out[m] == 0:
            del out[m]
    return out


def poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, a in p.items():
        for m2, b in q.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + a * b
    return {m: v for m, v in out.items() if v != 0}


def poly_deriv(p: dict, k: int) -> dict:
    out = {}
    for m, v in p.items():
        if m[k]:
            mm = list(m)
            mm[k] -= 1
            out[tuple(mm)] = m[k] * v
    return out


def poly_degree(p: dict) -> int:
    return max((sum(m) for m in p), default=-1)


def variable(n: int, k: int) -> dict:
    return {tuple(int(i == k) for i in range(n)): Fraction(1)}


def constant(n: int, c) -> dict:
    c = la.frac(c)
    return {(0,) * n: c} if c != 0 else {}


@dataclass(frozen=True)
class PolyObservable:
    """V-valued polynomial observable: components[j] is the j-th coordinate polynomial."""

    n_vars: int
    components: tuple

    @classmethod
    def from_linear(cls, f: LinearObservable) -> "PolyObservable":
        n = len(f.differential[0]) if f.differential else 0
        comps = []
        for c, row in zip(f.value_at_origin, f.differential):
            p = constant(n, c)
            for k, d in enumerate(row):
                if d != 0:
                    p = poly_add(p, variable(n, k), d)
            comps.append(p)
        return cls(n, tuple(comps))

    @property
    def degree(self) -> int:
        return max((poly_degree(p) for p in self.components), default=-1)


def _as_poly(f, n: int) -> PolyObservable:
    if isinstance(f, PolyObservable):
        return f
    if isinstance(f, LinearObservable):
        return PolyObservable.from_linear(f)
    raise TypeError(f"unsupported observable {type(f).__name__}")


def hamiltonian_field(f: PolyObservable, space: VSymplecticSpace) -> list[dict]:
    """Polynomial X with Omega_j X = grad f_j, solved monomial by monomial."""
    n = space.dim_u
    grads = [[poly_deriv(p, a) for a in range(n)] for p in f.components]
    monos = sorted({m for g in grads for ga in g for m in ga})
    x: list[dict] = [dict() for _ in range(n)]
    for m in monos:
        rows, rhs = [], []
        for j, (om, g) in enumerate(zip(space.omega, grads)):
            rows.extend(list(r) for r in om)
            rhs.extend(g[a].get(m, Fraction(0)) for a in range(n))
            if la.solve(rows, rhs) is None:
                raise NotHamiltonian(j)
        sol = la.solve(rows, rhs)
        for a in range(n):
            if sol[a] != 0:
                x[a][m] = sol[a]
    return x


def poisson_bracket(f: PolyObservable, h: PolyObservable, space: VSymplecticSpace) -> PolyObservable:
    """{f, h} = omega(X_f, X_h), cross-checked against X_f h."""
    n = space.dim_u
    xf, xh = hamiltonian_field(f, space), hamiltonian_field(h, space)
    comps = []
    for j, om in enumerate(space.omega):
        p: dict = {}
        for a in range(n):
            for b in range(n):
                if om[a][b] != 0 and xf[a] and xh[b]:
                    p = poly_add(p, poly_mul(xf[a], xh[b]), om[a][b])
        directional: dict = {}
        for a in range(n):
            if xf[a]:
                directional = poly_add(directional, poly_mul(xf[a], poly_deriv(h.components[j], a)))
        if p != directional:
            raise AssertionError("omega(X_f, X_h) != X_f h")
        comps.append(p)
    return PolyObservable(n, tuple(comps))


def theta_of(x: list[dict], space: VSymplecticSpace) -> list[dict]:
    """theta(X) as V-valued polynomials."""
    n = space.dim_u
    out = []
    if space.canonical is not None:
        k, ell = space.canonical
        for b in range(ell):
            p: dict = {}
            for a in range(k):
                if x[a]:
                    p = poly_add(p, poly_mul(variable(n, k + a * ell + b), x[a]))
            out.append(p)
        return out
    half = Fraction(1, 2)
    for om in space.omega:
        p = {}
        for a in range(n):
            for b in range(n):
                if om[a][b] != 0 and x[a]:
                    p = poly_add(p, poly_mul(x[a], variable(n, b)), half * om[a][b])
        out.append(p)
    return out


@dataclass
class FirstOrderOp:
    """psi -> sum_k vec[k] d_k psi + sum_j mult[j] G_j psi."""

    vec: list[dict]
    mult: list[dict]

    @property
    def raise_by(self) -> int:
        d = max((poly_degree(p) - 1 for p in self.vec if p), default=-1)
        return max(d, max((poly_degree(p) for p in self.mult if p), default=-1), 0)


def quantum_operator(f: PolyObservable, space: VSymplecticSpace) -> FirstOrderOp:
    x = hamiltonian_field(f, space)
    th = theta_of(x, space)
    return FirstOrderOp(x, [poly_add(t, c) for t, c in zip(th, f.components)])


@lru_cache(maxsize=32)
def monomial_basis(n: int, degree: int) -> tuple:
    """Exponent vectors of total degree <= degree, graded then lexicographic (descending)."""
    out = []
    for d in range(degree + 1):
        block = []
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        out.extend(block)
    return tuple(out)


class SectionSpace:
    def __init__(self, n_vars: int, rank: int, degree_cap: int):
        self.n, self.r, self.cap = n_vars, rank, degree_cap
        self.monos = monomial_basis(n_vars, degree_cap)
        self.index = {m: i for i, m in enumerate(self.monos)}
        self.size = len(self.monos) * rank

    def idx(self, mono, comp: int) -> int:
        return self.index[mono] * self.r + comp

    def columns_up_to(self, degree: int) -> np.ndarray:
        return np.array([i * self.r + c for i, m in enumerate(self.monos) if sum(m) <= degree for c in range(self.r)],
                        dtype=np.int64)


def _entries(op: FirstOrderOp, rep: AbelianRep, space: SectionSpace):
    """(row, col, value) triples of op on sections of degree <= cap - raise."""
    r = rep.rank
    gens = rep.generators
    top = space.cap - op.raise_by
    out = []
    for mono in space.monos:
        if sum(mono) > top:
            continue
        for c in range(r):
            col = space.idx(mono, c)
            acc: dict = {}
            basis_poly = {mono: 1}
            for k, coef in enumerate(op.vec):
                if coef and mono[k]:
                    for m, v in poly_mul(coef, poly_deriv(basis_poly, k)).items():
                        key = space.idx(m, c)
                        acc[key] = acc.get(key, 0) + v
            for j, coef in enumerate(op.mult):
                if not coef:
                    continue
                g = gens[j]
                for m, v in poly_mul(coef, basis_poly).items():
                    for a in range(r):
                        if g[a][c] != 0:
                            key = space.idx(m, a)
                            acc[key] = acc.get(key, 0) + v * g[a][c]
            out.extend((row, col, v) for row, v in acc.items() if v != 0)
    return out


def _denominator(x) -> int:
    if isinstance(x, GaussRational):
        return lcm(x.re.denominator, x.im.denominator)
    return Fraction(x).denominator


class _ExactMatrix:
    """(re + i im) / den with integer sparse re, im."""

    def __init__(self, re, im, den: int):
        self.re, self.im, self.den = re, im, den

    @classmethod
    def build(cls, entries, size: int):
        den = 1
        for _, _, v in entries:
            den = lcm(den, _denominator(v))
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        re, im = [], []
        for _, _, v in entries:
            g = v if isinstance(v, GaussRational) else GaussRational(v)
            re.append(int(g.re * den))
            im.append(int(g.im * den))
        mk = lambda d: sp.csr_matrix((np.array(d, dtype=object).astype(np.int64), (rows, cols)), shape=(size, size))
        return cls(mk(re), mk(im), den)

    def __matmul__(self, other: "_ExactMatrix") -> "_ExactMatrix":
        return _ExactMatrix(self.re @ other.re - self.im @ other.im, self.re @ other.im + self.im @ other.re,
                            self.den * other.den)

    def combine(self, other: "_ExactMatrix", sign: int) -> "_ExactMatrix":
        d = lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        return _ExactMatrix(self.re * a + sign * other.re * b, self.im * a + sign * other.im * b, d)

    def max_abs(self) -> int:
        return max(abs(self.re).max(), abs(self.im).max()) if self.re.nnz or self.im.nnz else 0

    def columns(self, cols) -> "_ExactMatrix":
        return _ExactMatrix(self.re[:, cols], self.im[:, cols], self.den)

    def to_complex(self):
        return (self.re.astype(float) + 1j * self.im.astype(float)) / self.den


_INT_LIMIT = 2**52


def _float_matrix(entries, size: int):
    rows = [e[0] for e in entries]
    cols = [e[1] for e in entries]
    vals = [complex(e[2]) for e in entries]
    return sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(size, size))


@dataclass
class CommutatorReport:
    defect_norm: float
    exact: bool
    domain_degree: int
    domain_dim: int

    @property
    def is_zero(self) -> bool:
        return self.defect_norm == 0


def _check_int_range(*ms):
    for m in ms:
        if m.max_abs() > _INT_LIMIT:
            raise OverflowError("integer realization exceeds the exact range; use smaller data")


def _key(f: PolyObservable):
    return tuple(tuple(sorted(p.items())) for p in f.components)


class OperatorRealization:
    """Matrices of Q_f on sections of degree <= degree_cap, cached per observable."""

    def __init__(self, space: VSymplecticSpace, rep: AbelianRep, degree_cap: int):
        if rep.dim_v != space.dim_v:
            raise DimensionMismatch("representation and form have different V")
        self.space, self.rep, self.cap = space, rep, degree_cap
        self.sections = SectionSpace(space.dim_u, rep.rank, degree_cap)
        self._cache: dict = {}

    def operator(self, f: PolyObservable):
        key = _key(f)
        if key not in self._cache:
            q = quantum_operator(f, self.space)
            ents = _entries(q, self.rep, self.sections)
            if self.rep.exact:
                m = _ExactMatrix.build(ents, self.sections.size)
                _check_int_range(m)
            else:
                m = _float_matrix(ents, self.sections.size)
            self._cache[key] = (q.raise_by, m)
        return self._cache[key]

    def defect(self, f, h) -> CommutatorReport:
        n = self.space.dim_u
        f, h = _as_poly(f, n), _as_poly(h, n)
        fh = poisson_bracket(f, h, self.space)
        (rf, mf), (rh, mh), (rfh, mfh) = (self.operator(g) for g in (f, h, fh))
        dom = self.cap - rf - rh
        if dom < 0 or self.cap - rfh < dom:
            raise DegreeOverflow(f"[Q_f, Q_h] leaves polynomials of degree <= {self.cap}")
        cols = self.sections.columns_up_to(dom)
        if self.rep.exact:
            comm = (mf @ mh.columns(cols)).combine(mh @ mf.columns(cols), -1)
            _check_int_range(comm)
            defect = comm.combine(mfh.columns(cols), -1)
            if defect.max_abs() == 0:
                return CommutatorReport(0.0, True, dom, len(cols))
            return CommutatorReport(float(np.linalg.norm(defect.to_complex().toarray(), 2)), True, dom, len(cols))
        d = (mf @ mh[:, cols] - mh @ mf[:, cols]) - mfh[:, cols]
        norm = float(np.linalg.norm(d.toarray(), 2)) if d.nnz else 0.0
        return CommutatorReport(norm, False, dom, len(cols))


def prequantum_commutator_check(f, h, rep: AbelianRep, degree_cap: int,
                                space: VSymplecticSpace) -> CommutatorReport:
    """Operator norm of [Q_f, Q_h] - Q_{f,h} on sections of degree <= degree_cap."""
    return OperatorRealization(space, rep, degree_cap).defect(f, h)


def affine_basis(space: VSymplecticSpace) -> list[LinearObservable]:
    """Constants e_j plus the linear observables whose Hamiltonian field is e_a.

    Together they span every affine Hamiltonian observable of a nondegenerate space."""
    n, ell = space.dim_u, space.dim_v
    out = [LinearObservable.constant([int(i == j) for i in range(ell)], n) for j in range(ell)]
    for a in range(n):
        diff = [[om[b][a] for b in range(n)] for om in space.omega]
        out.append(LinearObservable((0,) * ell, diff))
    return out
