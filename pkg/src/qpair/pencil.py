"""The bundle morphism ``E^{0,1} -> Z x (E/U)^C`` as an exact matrix pencil.

A point of ``Z = CP^1`` is written in homogeneous coordinates ``[z0 : z1]``
with ``zeta = z1 / z0``; it corresponds to the admissible structure
``u(zeta)`` of :func:`qpair.pairs.sphere_point_from_zeta`.  The fibre
``E^J`` (the ``-I`` eigenspace of ``J``) is spanned by ``2k`` sections
linear in ``(z0, z1)``, so composing with a quotient map ``E -> E/U``
gives the pencil ``P(z) = z0 A + z1 B``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ConsistencyError, InputError
from .exact import I, ONE, ZERO, Gauss, MatrixG, format_gauss, left_mult_matrix
from .exact.linalg import real_nullspace, real_rref
from .pairs import Pair, sphere_point_from_zeta

__all__ = [
    "CP1Point",
    "Pencil",
    "eigensections",
    "eigensection_check",
    "build_pencil",
    "evaluate",
    "reality_check",
    "fiber_kernel_dim",
    "twist_matrix",
]


@dataclass(frozen=True)
class CP1Point:
    """Homogeneous coordinates ``[z0 : z1]``, not both zero."""

    z0: Gauss
    z1: Gauss

    def __post_init__(self):
        object.__setattr__(self, "z0", Gauss.coerce(self.z0))
        object.__setattr__(self, "z1", Gauss.coerce(self.z1))
        if not self.z0 and not self.z1:
            raise InputError("[0:0] is not a point of the projective line")

    @classmethod
    def from_zeta(cls, zeta) -> CP1Point:
        """``zeta`` in Q(i), or ``None`` for infinity."""
        if zeta is None:
            return cls(ZERO, ONE)
        return cls(ONE, Gauss.coerce(zeta))

    def zeta(self):
        return None if not self.z0 else self.z1 / self.z0

    def antipode(self) -> CP1Point:
        return CP1Point(-self.z1.conj(), self.z0.conj())

    def sphere_point(self):
        return sphere_point_from_zeta(self.zeta())

    def __eq__(self, other):
        if not isinstance(other, CP1Point):
            return NotImplemented
        return self.z0 * other.z1 == self.z1 * other.z0

    def __hash__(self):
        z = self.zeta()
        return hash(("inf",) if z is None else (z.re, z.im))


# per-slot eigensection coefficients in the real basis (1, i, j, k):
# sigma(z0, z1) = z0 * v + z1 * w
_SECTIONS = (
    ((ONE, I, ZERO, ZERO), (ZERO, ZERO, I, ONE)),
    ((ZERO, ZERO, ONE, I), (-I, -ONE, ZERO, ZERO)),
)


def eigensections(k: int, sections=_SECTIONS) -> tuple[MatrixG, MatrixG]:
    """Block-diagonal ``4k x 2k`` matrices ``V, W`` with columns ``z0 v + z1 w``."""
    V = [[ZERO] * (2 * k) for _ in range(4 * k)]
    W = [[ZERO] * (2 * k) for _ in range(4 * k)]
    for s in range(k):
        for c, (v, w) in enumerate(sections):
            for r in range(4):
                V[4 * s + r][2 * s + c] = Gauss.coerce(v[r])
                W[4 * s + r][2 * s + c] = Gauss.coerce(w[r])
    return MatrixG(V, 2 * k), MatrixG(W, 2 * k)


def _block_left_mult(k: int, u) -> MatrixG:
    block = left_mult_matrix(u)
    rows = [[ZERO] * (4 * k) for _ in range(4 * k)]
    for s in range(k):
        for r in range(4):
            for c in range(4):
                rows[4 * s + r][4 * s + c] = block[r, c]
    return MatrixG(rows, 4 * k)


def eigensection_check(k: int, zeta, sections=_SECTIONS) -> None:
    """Verify ``(L_u + I) sigma = 0`` and independence at the point ``zeta``.

    Raises :class:`ConsistencyError` on failure; a failure means the section
    conventions are wrong and every computed degree would be meaningless.
    """
    x = CP1Point.from_zeta(zeta)
    V, W = eigensections(max(k, 1), sections)
    S = V.scale(x.z0) + W.scale(x.z1)
    L = _block_left_mult(max(k, 1), x.sphere_point().u)
    residual = L @ S + S.scale(I)
    if not residual.is_zero():
        raise ConsistencyError(f"eigensections are not -I eigenvectors at zeta = {_fmt_zeta(zeta)}")
    if S.rank() != S.ncols:
        raise ConsistencyError(f"eigensections are dependent at zeta = {_fmt_zeta(zeta)}")


def _fmt_zeta(zeta) -> str:
    return "inf" if zeta is None else format_gauss(Gauss.coerce(zeta))


def twist_matrix(k: int) -> MatrixG:
    """Block-diagonal ``C`` with ``conj(sigma(antipode z)) = sigma(z) C``."""
    rows = [[ZERO] * (2 * k) for _ in range(2 * k)]
    for s in range(k):
        rows[2 * s][2 * s + 1] = I
        rows[2 * s + 1][2 * s] = -I
    return MatrixG(rows, 2 * k)


@dataclass(frozen=True)
class Pencil:
    """``P(z0, z1) = z0 A + z1 B`` with ``A, B`` of shape ``m x 2k``."""

    k: int
    A: MatrixG
    B: MatrixG

    @property
    def m(self) -> int:
        return self.A.nrows

    @property
    def n(self) -> int:
        return self.A.ncols

    def at(self, x: CP1Point) -> MatrixG:
        return self.A.scale(x.z0) + self.B.scale(x.z1)

    def substitute(self, n) -> Pencil:
        """The pencil ``z -> P(N z)`` for ``N = ((a, b), (c, d))``."""
        (a, b), (c, d) = n
        return Pencil(
            self.k,
            self.A.scale(a) + self.B.scale(c),
            self.A.scale(b) + self.B.scale(d),
        )

    def transpose(self) -> Pencil:
        return Pencil(self.k, self.A.transpose(), self.B.transpose())

    def to_json(self) -> str:
        """Debug dump of the two coefficient matrices."""

        def mat(M):
            return [[format_gauss(x) for x in row] for row in M.rows]

        return json.dumps({"k": self.k, "m": self.m, "A": mat(self.A), "B": mat(self.B)}, indent=1)


def quotient_map(p: Pair, method: str = "echelon") -> list[list]:
    """Rows of a real map ``R^{4k} -> R^m`` with kernel exactly ``U``.

    ``"echelon"`` projects onto the non-pivot coordinates of the reduced
    echelon basis of ``U``; ``"orthogonal"`` uses a basis of ``U^perp``.
    Both give pencils related by a constant invertible row operation.
    """
    n = 4 * p.k
    rows = p.real_rows()
    if method == "orthogonal":
        return real_nullspace(rows, n)
    if method != "echelon":
        raise ValueError(f"unknown quotient method {method!r}")
    reduced, pivots = real_rref(rows, n)
    pivot_set = set(pivots)
    Q = []
    for c in range(n):
        if c in pivot_set:
            continue
        q = [0] * n
        q[c] = 1
        for row, piv in zip(reduced, pivots):
            q[piv] = -row[c]
        Q.append(q)
    return Q


def build_pencil(p: Pair, method: str = "echelon") -> Pencil:
    """The pencil of the pair: ``A = Q V``, ``B = Q W``."""
    k = p.k
    Q = quotient_map(p, method)
    V, W = eigensections(k)
    Qm = MatrixG(Q, 4 * k)
    return Pencil(k, Qm @ V, Qm @ W)


def evaluate(P: Pencil, x: CP1Point) -> MatrixG:
    return P.at(x)


def reality_check(P: Pencil) -> None:
    """Verify ``conj(P(antipode z)) = P(z) C`` identically and ``C conj(C) = -1``."""
    C = twist_matrix(P.k)
    if not (C @ C.conj() + MatrixG.identity(2 * P.k)).is_zero():
        raise ConsistencyError("twist matrix is not of quaternionic type")
    # conj(P(-conj z1, conj z0)) = z0 conj(B) - z1 conj(A)
    if P.B.conj() != P.A @ C or -P.A.conj() != P.B @ C:
        raise ConsistencyError("pencil does not commute with the real structure")


def fiber_kernel_dim(P: Pencil, x: CP1Point) -> int:
    """``2k - rank P(x)``, the complex dimension of ``U^C & E^J``."""
    return P.n - P.at(x).rank()
