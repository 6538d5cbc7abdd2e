"""Abelian unitary V-modules: weights, faithfulness, rank, balanced tensor
products and curvature blocks."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .linalg import GaussRational, I
from .vsympl import VSymplecticSpace

MERGE_TOL = 1e-7
RECON_TOL = 1e-9
SKEW_TOL = 1e-12


class NotCommuting(ValueError):
    pass


class NotSkewHermitian(ValueError):
    pass


class NotFaithful(ValueError):
    def __init__(self, certificate=None):
        self.certificate = certificate
        super().__init__(f"representation is not faithful (v = {certificate} acts by zero)")


class DimensionMismatch(ValueError):
    pass


class NotPrequantizable(ValueError):
    pass


def _exact_entry(x):
    if isinstance(x, (Fraction, GaussRational)):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return None


@dataclass(frozen=True)
class AbelianRep:
    """generators[j] is the action of the j-th basis vector of V on C^rank."""

    dim_v: int
    rank: int
    generators: tuple

    def __post_init__(self):
        gens = []
        exact = True
        for g in self.generators:
            rows = []
            for row in g:
                out = []
                for x in row:
                    e = _exact_entry(x)
                    if e is None:
                        exact = False
                        out.append(complex(x))
                    else:
                        out.append(e)
                rows.append(tuple(out))
            gens.append(tuple(rows))
        if not exact:
            gens = [tuple(tuple(complex(x) for x in row) for row in g) for g in gens]
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_exact", exact)
        if len(gens) != self.dim_v:
            raise DimensionMismatch(f"need {self.dim_v} generators, got {len(gens)}")
        if any(len(g) != self.rank or any(len(r) != self.rank for r in g) for g in gens):
            raise DimensionMismatch(f"generators must be {self.rank}x{self.rank}")
        self._check_skew_and_commuting()

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def arrays(self) -> list[np.ndarray]:
        return [np.array([[complex(x) for x in row] for row in g], dtype=complex).reshape(self.rank, self.rank)
                for g in self.generators]

    def _check_skew_and_commuting(self):
        if self.exact:
            for j, g in enumerate(self.generators):
                for a in range(self.rank):
                    for b in range(self.rank):
                        if la.conj(g[a][b]) != -g[b][a]:
                            raise NotSkewHermitian(f"generator {j} is not skew-Hermitian")
            mats = [[list(r) for r in g] for g in self.generators]
            for i in range(self.dim_v):
                for j in range(i + 1, self.dim_v):
                    if la.matmul(mats[i], mats[j]) != la.matmul(mats[j], mats[i]):
                        raise NotCommuting(f"generators {i} and {j} do not commute")
            return
        arr = self.arrays
        for j, g in enumerate(arr):
            if np.abs(g + g.conj().T).max(initial=0) > SKEW_TOL * max(1.0, np.abs(g).max(initial=0)):
                raise NotSkewHermitian(f"generator {j} is not skew-Hermitian")
        for i in range(self.dim_v):
            for j in range(i + 1, self.dim_v):
                c = arr[i] @ arr[j] - arr[j] @ arr[i]
                s = max(1.0, np.abs(arr[i]).max(initial=0) * np.abs(arr[j]).max(initial=0))
                if np.abs(c).max(initial=0) > 1e-10 * s:
                    raise NotCommuting(f"generators {i} and {j} do not commute")

    def action(self, v: Sequence) -> list:
        """Matrix of A_v = sum_j v_j G_j."""
        if self.exact:
            out = [[Fraction(0)] * self.rank for _ in range(self.rank)]
            for c, g in zip(v, self.generators):
                c = la.frac(c) if not isinstance(c, GaussRational) else c
                if c == 0:
                    continue
                for a in range(self.rank):
                    for b in range(self.rank):
                        out[a][b] = out[a][b] + c * g[a][b]
            return out
        return sum((complex(c) * g for c, g in zip(v, self.arrays)), np.zeros((self.rank, self.rank), complex))

    @classmethod
    def from_weights(cls, weights: Sequence[Sequence], multiplicities: Sequence[int] | None = None) -> "AbelianRep":
        """Diagonal representation with A_v acting on the lambda-line by i * <mu, v>.

        Weights are given as mu = lambda / i (real vectors)."""
        weights = [list(w) for w in weights]
        if not weights:
            raise ValueError("use zero_rep for the rank-0 module")
        mult = list(multiplicities) if multiplicities is not None else [1] * len(weights)
        ell = len(weights[0])
        diag = [w for w, m in zip(weights, mult) for _ in range(m)]
        r = len(diag)
        exact = all(_exact_entry(x) is not None for w in diag for x in w)
        gens = []
        for j in range(ell):
            if exact:
                g = [[I * la.frac(diag[a][j]) if a == b else Fraction(0) for b in range(r)] for a in range(r)]
            else:
                g = [[1j * float(diag[a][j]) if a == b else 0.0 for b in range(r)] for a in range(r)]
            gens.append(g)
        return cls(ell, r, tuple(gens))

    @classmethod
    def zero_rep(cls, dim_v: int, rank: int = 0) -> "AbelianRep":
        return cls(dim_v, rank, tuple(tuple(tuple(Fraction(0) for _ in range(rank)) for _ in range(rank))
                                      for _ in range(dim_v)))

    @property
    def is_zero(self) -> bool:
        return self.rank == 0


@dataclass(frozen=True)
class WeightSet:
    """Weights lambda stored as real vectors lambda / unit, unit in {"i", "2πi"}."""

    weights: tuple
    multiplicities: tuple
    bases: tuple = ()
    exact: bool = True
    unit: str = "i"
    reconstruction_error: float = 0.0

    @property
    def dim_v(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> list[tuple]:
        return [w for w, m in zip(self.weights, self.multiplicities) for _ in range(m)]

    def as_counter(self) -> Counter:
        if not self.exact:
            raise TypeError("multiset keys need exact weights")
        return Counter(dict(zip(self.weights, self.multiplicities)))

    def numeric(self) -> np.ndarray:
        """Weights as lambda / i floats."""
        f = 2 * np.pi if self.unit == "2πi" else 1.0
        return np.array([[float(x) * f for x in w] for w in self.weights], dtype=float).reshape(-1, self.dim_v)


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    order = np.argsort(values)
    groups: list[list[int]] = []
    for idx in order:
        if groups and abs(values[idx] - values[groups[-1][-1]]) <= tol:
            groups[-1].append(int(idx))
        else:
            groups.append([int(idx)])
    return groups


def _float_blocks(gens: list[np.ndarray], basis: np.ndarray, depth: int) -> list[np.ndarray]:
    if depth == len(gens) or basis.shape[1] == 0:
        return [basis]
    b = basis.conj().T @ gens[depth] @ basis
    h = -1j * b
    h = (h + h.conj().T) / 2
    vals, vecs = np.linalg.eigh(h)
    out = []
    for grp in _cluster(vals, MERGE_TOL):
        out.extend(_float_blocks(gens, basis @ vecs[:, grp], depth + 1))
    return out


def _gram_schmidt_exact(vectors):
    out = []
    for v in vectors:
        w = list(v)
        for u in out:
            c = sum((la.conj(a) * b for a, b in zip(u, w)), Fraction(0)) / sum((la.conj(a) * a for a in u), Fraction(0))
            w = [b - c * a for a, b in zip(u, w)]
        out.append(w)
    return out


def _exact_decomposition(rep: AbelianRep, candidates: list[tuple]) -> WeightSet | None:
    r = rep.rank
    bases, mults = [], []
    for mu in candidates:
        rows = []
        for j, g in enumerate(rep.generators):
            for a in range(r):
                rows.append([g[a][b] - (I * mu[j] if a == b else 0) for b in range(r)])
        ker = la.nullspace(rows, r)
        if not ker:
            return None
        bases.append(tuple(tuple(v) for v in _gram_schmidt_exact(ker)))
        mults.append(len(ker))
    if sum(mults) != r:
        return None
    # exact reconstruction: G_j = sum_lambda i mu_j P_lambda
    for j, g in enumerate(rep.generators):
        rebuilt = [[Fraction(0)] * r for _ in range(r)]
        for mu, basis in zip(candidates, bases):
            for v in basis:
                nv = sum((la.conj(x) * x for x in v), Fraction(0))
                c = I * mu[j] / nv
                for a in range(r):
                    for b in range(r):
                        rebuilt[a][b] = rebuilt[a][b] + c * v[a] * la.conj(v[b])
        if any(rebuilt[a][b] != g[a][b] for a in range(r) for b in range(r)):
            return None
    return WeightSet(tuple(candidates), tuple(mults), tuple(bases), exact=True)


def weight_decomposition(rep: AbelianRep) -> WeightSet:
    """Joint eigenspaces of the commuting skew-Hermitian generators.

    Floating recursive block diagonalization locates the weights; exact inputs
    whose weights are rational are then certified over Q(i).
    """
    if rep.rank == 0:
        return WeightSet((), (), (), exact=rep.exact)
    gens = rep.arrays
    blocks = _float_blocks(gens, np.eye(rep.rank, dtype=complex), 0)
    found: list[tuple[np.ndarray, np.ndarray]] = []
    for u in blocks:
        mu = np.array([np.real(np.trace(-1j * (u.conj().T @ g @ u))) / u.shape[1] for g in gens])
        for i, (m0, u0) in enumerate(found):
            if np.max(np.abs(m0 - mu)) <= MERGE_TOL:
                found[i] = (m0, np.hstack([u0, u]))
                break
        else:
            found.append((mu, u))
    found.sort(key=lambda t: tuple(t[0]))
    if rep.exact:
        cands = [tuple(la.rationalize(float(x)) for x in mu) for mu, _ in found]
        if all(x is not None for c in cands for x in c):
            ws = _exact_decomposition(rep, cands)
            if ws is not None:
                return ws
    err = 0.0
    for j, g in enumerate(gens):
        rebuilt = sum((u @ np.diag(np.full(u.shape[1], 1j * mu[j])) @ u.conj().T for mu, u in found),
                      np.zeros_like(g))
        err = max(err, float(np.abs(rebuilt - g).max(initial=0)))
    if err > RECON_TOL:
        raise AssertionError(f"weight reconstruction error {err:.3e} exceeds {RECON_TOL}")
    return WeightSet(tuple(tuple(float(x) for x in mu) for mu, _ in found),
                     tuple(u.shape[1] for _, u in found),
                     tuple(u for _, u in found), exact=False, reconstruction_error=err)


def rebuild_generators(ws: WeightSet):
    """Inverse of weight_decomposition (float): G_j = sum_lambda i mu_j U U^*."""
    if ws.exact:
        bases = [np.array([[complex(x) for x in v] for v in b]).T for b in ws.bases]
        bases = [b / np.linalg.norm(b, axis=0) for b in bases]
    else:
        bases = list(ws.bases)
    r = ws.total
    return [sum((b @ b.conj().T * (1j * float(mu[j])) for mu, b in zip(ws.weights, bases)), np.zeros((r, r), complex))
            for j in range(ws.dim_v)]


def _weight_matrix_null(weights: list, dim_v: int, exact: bool):
    if exact:
        return la.nullspace([list(w) for w in weights], dim_v) if weights else [
            [Fraction(int(i == j)) for i in range(dim_v)] for j in range(dim_v)]
    if not weights:
        return [list(np.eye(dim_v)[j]) for j in range(dim_v)]
    w = np.array(weights, dtype=float)
    _, s, vt = np.linalg.svd(w)
    rank = int((s > 1e-9 * max(1.0, s.max(initial=0))).sum())
    out = []
    for v in vt[rank:]:
        v = v / v[np.argmax(np.abs(v))]
        out.append(list(v))
    return out


def is_faithful(rep_or_weights):
    """(True, None) if the weights span V*, else (False, v) with every weight vanishing on v."""
    ws = rep_or_weights if isinstance(rep_or_weights, WeightSet) else weight_decomposition(rep_or_weights)
    dim_v = rep_or_weights.dim_v if isinstance(rep_or_weights, AbelianRep) else ws.dim_v
    null = _weight_matrix_null(list(ws.weights), dim_v, ws.exact)
    return (False, null[0]) if null else (True, None)


@dataclass
class RankReport:
    status: str  # "minimal" | "above_minimal"
    rank: int
    dim_v: int
    basis: tuple | None = None


def rank_check(rep: AbelianRep) -> RankReport:
    ok, cert = is_faithful(rep)
    if not ok:
        raise NotFaithful(cert)
    if rep.rank == rep.dim_v:
        ws = weight_decomposition(rep)
        # faithful with r = l: l distinct weights spanning V*, i.e. a basis
        assert len(ws.weights) == rep.dim_v and all(m == 1 for m in ws.multiplicities)
        return RankReport("minimal", rep.rank, rep.dim_v, ws.weights)
    return RankReport("above_minimal", rep.rank, rep.dim_v)


def _same_weight(a, b, exact: bool) -> bool:
    if exact:
        return tuple(a) == tuple(b)
    return max(abs(float(x) - float(y)) for x, y in zip(a, b)) <= MERGE_TOL


def balanced_kernel_dim(a: AbelianRep, b: AbelianRep) -> int:
    """dim of {T in E (x) E' : (A_v (x) 1) T = (1 (x) A'_v) T for all v}."""
    ra, rb = a.rank, b.rank
    if ra == 0 or rb == 0:
        return 0
    if a.exact and b.exact:
        rows = []
        for ga, gb in zip(a.generators, b.generators):
            for i in range(ra):
                for k in range(rb):
                    row = [Fraction(0)] * (ra * rb)
                    for j in range(ra):
                        row[j * rb + k] = row[j * rb + k] + ga[i][j]
                    for l in range(rb):
                        row[i * rb + l] = row[i * rb + l] - gb[k][l]
                    rows.append(row)
        return len(la.nullspace(rows, ra * rb))
    k = np.vstack([np.kron(ga, np.eye(rb)) - np.kron(np.eye(ra), gb) for ga, gb in zip(a.arrays, b.arrays)])
    s = np.linalg.svd(k, compute_uv=False)
    return ra * rb - int((s > 1e-8 * max(1.0, s.max(initial=0))).sum())


def tensor_rep(a: AbelianRep, b: AbelianRep, *, strict: bool = False) -> AbelianRep:
    """V-balanced tensor product: the weight-lambda blocks pair up, E_lambda (x) E'_lambda."""
    if a.dim_v != b.dim_v:
        raise DimensionMismatch("representations of different V")
    wa, wb = weight_decomposition(a), weight_decomposition(b)
    exact = wa.exact and wb.exact
    shared, mults = [], []
    for w, m in zip(wa.weights, wa.multiplicities):
        for w2, m2 in zip(wb.weights, wb.multiplicities):
            if _same_weight(w, w2, exact):
                shared.append(w)
                mults.append(m * m2)
                break
    if sum(mults) != balanced_kernel_dim(a, b):
        raise AssertionError("balanced tensor rank disagrees with the weight pairing")
    if not shared:
        if strict:
            raise NotPrequantizable("no common weights: the balanced tensor product is zero")
        return AbelianRep.zero_rep(a.dim_v)
    out = AbelianRep.from_weights(shared, mults)
    if strict and not is_faithful(out)[0]:
        raise NotPrequantizable("common weights do not span V*")
    return out


@dataclass(frozen=True)
class CurvatureForm:
    """The scalar 2-form unit * coefficient (unit = i or 2πi) on one weight block."""

    weight: tuple
    coefficient: tuple
    unit: str = "i"


def curvature_components(rep_or_weights, space: VSymplecticSpace) -> list[CurvatureForm]:
    """-lambda o omega for each weight lambda = unit * mu."""
    ws = rep_or_weights if isinstance(rep_or_weights, WeightSet) else weight_decomposition(rep_or_weights)
    if ws.dim_v != space.dim_v:
        raise DimensionMismatch("weights and form live on different V")
    ok, cert = is_faithful(ws)
    if not ok:
        raise NotFaithful(cert)
    out = []
    n = space.dim_u
    for mu in ws.weights:
        if ws.exact:
            m = [[-sum((x * om[a][b] for x, om in zip(mu, space.omega)), Fraction(0)) for b in range(n)]
                 for a in range(n)]
            if any(m[a][b] != -m[b][a] for a in range(n) for b in range(n)):
                raise AssertionError("curvature form is not skew")
        else:
            arr = -sum(float(x) * np.array([[float(y) for y in r] for r in om]) for x, om in zip(mu, space.omega))
            if not np.allclose(arr, -arr.T, atol=1e-12):
                raise AssertionError("curvature form is not skew")
            m = arr.tolist()
        out.append(CurvatureForm(tuple(mu), tuple(tuple(r) for r in m), ws.unit))
    return out


def curvature_of_weight(mu: Sequence, space: VSymplecticSpace):
    """Coefficient matrix of -lambda o omega for a single exact weight (faithfulness not required)."""
    n = space.dim_u
    return [[-sum((la.frac(x) * om[a][b] for x, om in zip(mu, space.omega)), Fraction(0)) for b in range(n)]
            for a in range(n)]
