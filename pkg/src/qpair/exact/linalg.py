"""Exact dense linear algebra over Q and Q(i).

Real subspaces are handled as lists of row vectors of rationals and reduced
with FLINT.  Matrices over Q(i) (:class:`MatrixG`) are ranked through their
real 2x2-block form ``[[X, -Y], [Y, X]]``, whose rank is twice the complex
rank, and their kernels are computed by exact Gauss-Jordan elimination.
"""

from __future__ import annotations

from functools import reduce

import flint
import gmpy2
from gmpy2 import mpq

from .numbers import ONE, ZERO, Gauss, Quaternion, Rational, rational

__all__ = [
    "MatrixG",
    "rank",
    "kernel_basis",
    "left_mult_matrix",
    "real_rref",
    "real_rank",
    "real_nullspace",
    "real_intersection",
    "real_sum",
    "real_contains",
]


# --- real (Q) helpers -------------------------------------------------------


def _int_row(row) -> list[int]:
    den = reduce(gmpy2.lcm, (q.denominator for q in row), gmpy2.mpz(1))
    return [int(q * den) for q in row]


def _fmpz(rows, ncols: int) -> flint.fmpz_mat:
    flat = []
    for row in rows:
        flat.extend(_int_row(row))
    return flint.fmpz_mat(len(rows), ncols, flat)


def real_rank(rows, ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return _fmpz(rows, ncols).rank()


def real_rref(rows, ncols: int) -> tuple[list[list[Rational]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    if not rows or not ncols:
        return [], []
    flat = []
    for row in rows:
        flat.extend(flint.fmpq(int(q.numerator), int(q.denominator)) for q in row)
    reduced, r = flint.fmpq_mat(len(rows), ncols, flat).rref()
    out, pivots = [], []
    for i in range(r):
        row = [mpq(int(reduced[i, j].p), int(reduced[i, j].q)) for j in range(ncols)]
        pivots.append(next(j for j, x in enumerate(row) if x))
        out.append(row)
    return out, pivots


def real_nullspace(rows, ncols: int) -> list[list[Rational]]:
    """Canonical basis of ``{x : row . x = 0 for every row}``."""
    reduced, pivots = real_rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def real_sum(x, y, ncols: int) -> list[list[Rational]]:
    return real_rref(list(x) + list(y), ncols)[0]


def real_intersection(x, y, ncols: int) -> list[list[Rational]]:
    """Canonical basis of span(x) & span(y), via annihilators."""
    constraints = real_nullspace(x, ncols) + real_nullspace(y, ncols)
    if not constraints:
        return real_rref([[mpq(int(i == j)) for j in range(ncols)] for i in range(ncols)], ncols)[0]
    return real_rref(real_nullspace(constraints, ncols), ncols)[0]


def real_contains(x, vectors, ncols: int) -> bool:
    vectors = list(vectors)
    if not vectors:
        return True
    return real_rank(list(x) + vectors, ncols) == real_rank(x, ncols)


# --- matrices over Q(i) -------------------------------------------------------


class MatrixG:
    """Immutable dense matrix of :class:`Gauss` entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols: int | None = None):
        rows = tuple(tuple(Gauss.coerce(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(row) != ncols for row in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> MatrixG:
        return cls([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> MatrixG:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns, nrows: int) -> MatrixG:
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def __eq__(self, other):
        if not isinstance(other, MatrixG):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __add__(self, other: MatrixG) -> MatrixG:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return MatrixG(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def __neg__(self) -> MatrixG:
        return MatrixG([[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: MatrixG) -> MatrixG:
        return self + (-other)

    def scale(self, c) -> MatrixG:
        c = Gauss.coerce(c)
        return MatrixG([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: MatrixG) -> MatrixG:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for r in self.rows:
            out.append([_dot(r, c) for c in cols])
        return MatrixG(out, other.ncols)

    def apply(self, vec) -> tuple:
        return tuple(_dot(r, vec) for r in self.rows)

    def transpose(self) -> MatrixG:
        return MatrixG([self.column(j) for j in range(self.ncols)], self.nrows)

    def conj(self) -> MatrixG:
        return MatrixG([[a.conj() for a in r] for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def is_real(self) -> bool:
        return all(a.im == 0 for r in self.rows for a in r)

    def realify(self) -> list[list[Rational]]:
        """Rows of the real block matrix ``[[X, -Y], [Y, X]]`` where ``M = X + I*Y``."""
        top = [[a.re for a in r] + [-a.im for a in r] for r in self.rows]
        bottom = [[a.im for a in r] + [a.re for a in r] for r in self.rows]
        return top + bottom

    def rank(self) -> int:
        if not self.nrows or not self.ncols:
            return 0
        return real_rank(self.realify(), 2 * self.ncols) // 2

    def rref(self) -> tuple[list[list[Gauss]], list[int]]:
        return gauss_rref([list(r) for r in self.rows], self.ncols)

    def kernel_basis(self) -> list[tuple]:
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivot_set:
                continue
            v = [ZERO] * self.ncols
            v[f] = ONE
            for row, p in zip(reduced, pivots):
                v[p] = -row[f]
            basis.append(tuple(v))
        return basis

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.rows)
        return f"MatrixG({self.nrows}x{self.ncols}: [{body}])"


def _dot(r, c) -> Gauss:
    re = mpq(0)
    im = mpq(0)
    for a, b in zip(r, c):
        if a.re or a.im:
            re += a.re * b.re - a.im * b.im
            im += a.re * b.im + a.im * b.re
    return Gauss(re, im)


def gauss_rref(rows: list[list[Gauss]], ncols: int) -> tuple[list[list[Gauss]], list[int]]:
    """Reduced row echelon form over Q(i); pivots scaled to 1."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def gauss_rank(rows, ncols: int) -> int:
    """Rank over Q(i) of a list of Gauss rows (FLINT via realification)."""
    if not rows or not ncols:
        return 0
    return MatrixG(rows, ncols).rank()


def rank(m: MatrixG) -> int:
    return m.rank()


def kernel_basis(m: MatrixG) -> list[tuple]:
    return m.kernel_basis()


def left_mult_matrix(u: Quaternion) -> MatrixG:
    """Matrix of ``x -> u*x`` in the real basis (1, i, j, k)."""
    basis = [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]
    cols = [(u * e).coords() for e in basis]
    return MatrixG.from_columns(cols, 4)


def real_vector(values) -> list[Rational]:
    return [rational(v) for v in values]
