"""Exact linear algebra over Q and Q(i).

Matrices are lists of rows. Entries are ``Fraction`` or :class:`GaussRational`;
every routine only needs field operations and an exact zero test, so the same
code serves both fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


@dataclass(frozen=True)
class GaussRational:
    """An element re + i*im of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if type(self.re) is not Fraction:
            object.__setattr__(self, "re", Fraction(self.re))
        if type(self.im) is not Fraction:
            object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return GaussRational(Fraction(x))
        if isinstance(x, complex):
            return GaussRational(Fraction(x.real), Fraction(x.imag))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __repr__(self):
        if self.im == 0:
            return f"G({self.re})"
        return f"G({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = GaussRational(0, 1)


def conj(x):
    return x.conjugate() if isinstance(x, GaussRational) else x


def frac(x) -> Fraction:
    """Parse an int, Fraction or 'p/q' string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        # floats are accepted only when they are exact small binary fractions
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussRational)) and not isinstance(x, bool)


def zeros(m: int, n: int):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def dot(u, v):
    return sum((x * y for x, y in zip(u, v) if x != 0 and y != 0), Fraction(0))


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(i, x) for i, x in enumerate(row) if x != 0]
        out.append([sum((x * col[i] for i, x in nz if col[i] != 0), Fraction(0)) for col in bt])
    return out


def matvec(a, v):
    return [dot(row, v) for row in a]


def scale(c, v):
    return [c * x for x in v]


def add(u, v):
    return [x + y for x, y in zip(u, v)]


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols: int):
    """Basis of {x : A x = 0} for A given by its rows (ncols unknowns)."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution x of A x = b, or None when inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return x


def det(a) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d = d * m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a):
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def span_equal(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    ra, rb = rank(a, ncols) if a else 0, rank(b, ncols) if b else 0
    if ra != rb:
        return False
    both = list(a) + list(b)
    return (rank(both, ncols) if both else 0) == ra


def inertia(sym) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) of a symmetric or Hermitian matrix over Q / Q(i).

    Congruence diagonalization; by Sylvester's law of inertia the counts do not
    depend on the pivoting choices.
    """
    m = [list(r) for r in sym]
    n = len(m)
    diag = []
    k = 0
    while k < n:
        size = len(m)
        if size == 0:
            break
        p = next((i for i in range(size) if m[i][i] != 0), None)
        if p is None:
            # all diagonal entries vanish: find an off-diagonal pair
            pair = next(((i, j) for i in range(size) for j in range(size) if i != j and m[i][j] != 0), None)
            if pair is None:
                diag.extend([Fraction(0)] * size)
                break
            i, j = pair
            # replace row/col i by row_i + t*row_j so that the new (i,i) entry is nonzero
            t = Fraction(1)
            val = m[i][j] * conj(t) + t * m[j][i]
            if val == 0:
                t = I
                val = m[i][j] * conj(t) + t * m[j][i]
            for c in range(size):
                m[i][c] = m[i][c] + t * m[j][c]
            for r in range(size):
                m[r][i] = m[r][i] + conj(t) * m[r][j]
            p = i
        piv = m[p][p]
        diag.append(piv)
        rest = [i for i in range(size) if i != p]
        new = [[m[r][c] - m[r][p] * m[p][c] / piv for c in rest] for r in rest]
        m = new
        k += 1
    plus = minus = zero = 0
    for d in diag:
        v = d.re if isinstance(d, GaussRational) else d
        if v > 0:
            plus += 1
        elif v < 0:
            minus += 1
        else:
            zero += 1
    return plus, minus, zero


def to_complex_array(a):
    import numpy as np

    return np.array([[complex(x) for x in row] for row in a], dtype=complex)


def rationalize(x: float, max_denominator: int = 10**6, tol: float = 1e-9) -> Fraction | None:
    """Nearest small-denominator rational to x, or None if none lies within tol."""
    f = Fraction(x).limit_denominator(max_denominator)
    return f if abs(float(f) - x) <= tol else None


def as_fraction_matrix(a: Iterable[Iterable]):
    return [[frac(x) for x in row] for row in a]
