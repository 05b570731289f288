"""Smith normal form of polynomial matrices over Q(i)[t]."""

from __future__ import annotations

from .linalg import MatrixG
from .polys import Poly, p_deg, p_divmod, p_gcd, p_exact_div, p_monic, p_mul, p_sub, p_trim


class PolyMatrix:
    """Dense matrix of univariate polynomials (coefficient tuples, low degree first)."""

    __slots__ = ("entries", "nrows", "ncols")

    def __init__(self, entries, ncols: int | None = None):
        entries = [[p_trim(e) for e in row] for row in entries]
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        if any(len(row) != ncols for row in entries):
            raise ValueError("ragged polynomial matrix")
        self.entries = tuple(tuple(row) for row in entries)
        self.nrows = len(entries)
        self.ncols = ncols

    @classmethod
    def from_pencil(cls, a: MatrixG, b: MatrixG) -> PolyMatrix:
        """The matrix ``a + t*b``."""
        if a.shape != b.shape:
            raise ValueError("pencil coefficients differ in shape")
        return cls(
            [[(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.rows, b.rows)], a.ncols
        )

    def __getitem__(self, idx) -> Poly:
        i, j = idx
        return self.entries[i][j]


def smith_form(m: PolyMatrix) -> list[Poly]:
    """Invariant factors ``f1 | f2 | ... | fr`` (monic), r = rank over Q(i)(t).

    Elimination uses unimodular row and column operations only; the
    diagonal obtained is then brought to divisibility order by
    ``diag(a, b) ~ diag(gcd, lcm)``.
    """
    a = [list(row) for row in m.entries]
    nrows, ncols = m.nrows, m.ncols
    diag: list[Poly] = []
    s = 0
    while s < min(nrows, ncols):
        pos = _min_degree_entry(a, s, s, nrows, ncols)
        if pos is None:
            break
        _move_to(a, pos, s)
        while True:
            pivot = a[s][s]
            clean = True
            for i in range(s + 1, nrows):
                if a[i][s]:
                    q, r = p_divmod(a[i][s], pivot)
                    if q:
                        a[i] = [x if j < s else p_sub(x, p_mul(q, y)) for j, (x, y) in enumerate(zip(a[i], a[s]))]
                    if r:
                        clean = False
            for j in range(s + 1, ncols):
                if a[s][j]:
                    q, r = p_divmod(a[s][j], pivot)
                    if q:
                        for i in range(s, nrows):
                            if a[i][s]:
                                a[i][j] = p_sub(a[i][j], p_mul(q, a[i][s]))
                    if r:
                        clean = False
            if clean:
                break
            cand = [(i, s) for i in range(s, nrows) if a[i][s]] + [
                (s, j) for j in range(s + 1, ncols) if a[s][j]
            ]
            _move_to(a, min(cand, key=lambda ij: p_deg(a[ij[0]][ij[1]])), s)
        diag.append(p_monic(a[s][s]))
        s += 1
    return _divisibility_chain(diag)


def _min_degree_entry(a, r0, c0, nrows, ncols):
    best, best_deg = None, None
    for i in range(r0, nrows):
        row = a[i]
        for j in range(c0, ncols):
            if row[j]:
                d = len(row[j]) - 1
                if best is None or d < best_deg:
                    best, best_deg = (i, j), d
                    if d == 0:
                        return best
    return best


def _move_to(a, pos, s):
    i, j = pos
    if i != s:
        a[i], a[s] = a[s], a[i]
    if j != s:
        for row in a:
            row[j], row[s] = row[s], row[j]


def _divisibility_chain(diag: list[Poly]) -> list[Poly]:
    d = list(diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = p_gcd(d[i], d[j])
            if p_deg(g) == p_deg(d[i]):
                continue
            lcm = p_exact_div(p_mul(d[i], d[j]), g)
            d[i], d[j] = g, p_monic(lcm)
    return [p_monic(x) for x in d]
