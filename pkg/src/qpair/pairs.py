"""Pairs (U, H^k): a real subspace of a standard quaternionic vector space.

``H^k`` carries the left H-module structure; its admissible complex
structures are left multiplication, slot by slot, by unit imaginary
quaternions.  Real coordinates use the basis (1, i, j, k) in each slot, so a
vector of ``H^k`` is a row of ``4k`` rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import InputError
from .exact import I, ZERO, Gauss, Q1, QI, QJ, QK, Quaternion
from .exact.linalg import real_nullspace, real_rank, real_rref

__all__ = [
    "Pair",
    "SpherePoint",
    "Rotation",
    "Automorphism",
    "ComplexPair",
    "validate",
    "dual",
    "product",
    "act",
    "gen_U",
    "gen_V",
    "gen_W",
    "intersection_dim",
    "complex_decompose",
    "sphere_point_from_zeta",
    "random_automorphism",
]


# --- vectors ----------------------------------------------------------------


def vector_to_real(vec) -> list:
    out = []
    for q in vec:
        out.extend(q.coords())
    return out


def real_to_vector(row) -> tuple:
    return tuple(Quaternion.from_coords(row[4 * s : 4 * s + 4]) for s in range(len(row) // 4))


def left_mul_vector(u: Quaternion, vec) -> tuple:
    return tuple(u * q for q in vec)


# --- pairs ------------------------------------------------------------------


@dataclass(frozen=True)
class Pair:
    """A real subspace ``U`` of ``H^k`` given by a basis of k-tuples of quaternions."""

    k: int
    basis: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(v) for v in self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def real_dim(self) -> int:
        return 4 * self.k

    def real_rows(self) -> list:
        return [vector_to_real(v) for v in self.basis]

    @classmethod
    def from_real_rows(cls, k: int, rows) -> Pair:
        return cls(k, tuple(real_to_vector(r) for r in rows))

    @classmethod
    def zero(cls, k: int) -> Pair:
        return cls(k, ())

    @classmethod
    def full(cls, k: int) -> Pair:
        rows = [[mpq(int(i == j)) for j in range(4 * k)] for i in range(4 * k)]
        return cls.from_real_rows(k, rows)


def validate(p: Pair) -> Pair:
    """Check the pair and return it with its basis in reduced echelon form."""
    if not isinstance(p.k, int) or p.k < 0:
        raise InputError(f"quaternionic dimension must be a natural number, got {p.k!r}")
    for n, v in enumerate(p.basis):
        if len(v) != p.k:
            raise InputError(f"basis vector {n} has {len(v)} slots, expected {p.k}")
    if p.dim > 4 * p.k:
        raise InputError(f"dimension overflow: {p.dim} vectors in a space of real dimension {4 * p.k}")
    rows = p.real_rows()
    reduced, _ = real_rref(rows, 4 * p.k)
    if len(reduced) != len(rows):
        raise InputError(f"dependent basis: rank {len(reduced)} < {len(rows)} vectors")
    return Pair.from_real_rows(p.k, reduced)


def dual(p: Pair) -> Pair:
    """The pair (U^perp, H^k), realizing (Ann U, E*) under the standard self-duality."""
    return Pair.from_real_rows(p.k, real_nullspace(p.real_rows(), 4 * p.k))


def product(p: Pair, other: Pair, rotation: Rotation | None = None) -> Pair:
    """Product pair in ``H^(k + k')``; the second factor is straightened by ``g^-1``."""
    ginv = rotation.g.inverse() if rotation is not None else Q1
    zero = Quaternion()
    basis = [tuple(v) + (zero,) * other.k for v in p.basis]
    basis += [(zero,) * p.k + left_mul_vector(ginv, v) for v in other.basis]
    return validate(Pair(p.k + other.k, basis))


def act(phi: Automorphism, p: Pair) -> Pair:
    """Image ``{a u A : u in U}`` of the pair under ``phi = (a, A)``."""
    if p.k != phi.k:
        raise InputError(f"automorphism of H^{phi.k} applied to a pair in H^{p.k}")
    basis = [left_mul_vector(phi.a, _row_times(v, phi.A)) for v in p.basis]
    return validate(Pair(p.k, basis))


def _row_times(v, A) -> tuple:
    k = len(v)
    out = []
    for j in range(len(A[0]) if A else 0):
        acc = Quaternion()
        for i in range(k):
            if v[i] and A[i][j]:
                acc = acc + v[i] * A[i][j]
        out.append(acc)
    return tuple(out)


def intersection_dim(p: Pair, J: SpherePoint) -> int:
    """Real dimension of ``U & J U``."""
    rows = p.real_rows()
    if not rows:
        return 0
    jrows = [vector_to_real(left_mul_vector(J.u, v)) for v in p.basis]
    return 2 * len(rows) - real_rank(rows + jrows, 4 * p.k)


# --- the sphere of admissible structures --------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    """A rational unit imaginary quaternion, i.e. an admissible complex structure."""

    u: Quaternion

    def __post_init__(self):
        if not self.u.is_imaginary_unit():
            raise InputError(f"{self.u!r} is not a unit imaginary quaternion")

    def antipode(self) -> SpherePoint:
        return SpherePoint(-self.u)

    def zeta(self):
        """Stereographic coordinate from ``-i``; ``None`` stands for infinity."""
        u = self.u
        if u.i == -1:
            return None
        return Gauss(u.j, u.k) / (1 + u.i)

    def vector(self) -> tuple:
        return (self.u.i, self.u.j, self.u.k)


def sphere_point_from_zeta(zeta) -> SpherePoint:
    """``u = ((1 - |z|^2) i + 2x j + 2y k) / (1 + |z|^2)``; ``None`` maps to ``-i``."""
    if zeta is None:
        return SpherePoint(-QI)
    zeta = Gauss.coerce(zeta)
    x, y = zeta.re, zeta.im
    den = 1 + x * x + y * y
    return SpherePoint(Quaternion(0, (1 - x * x - y * y) / den, 2 * x / den, 2 * y / den))


def antipodal_zeta(zeta):
    """``zeta -> -1 / conj(zeta)``."""
    if zeta is None:
        return ZERO
    zeta = Gauss.coerce(zeta)
    if not zeta:
        return None
    return -(zeta.conj().inverse())


@dataclass(frozen=True)
class Rotation:
    """``u -> g u g^-1`` for a rational unit quaternion ``g``."""

    g: Quaternion = field(default_factory=lambda: Q1)

    def __post_init__(self):
        if self.g.norm() != 1:
            raise InputError(f"rotation quaternion {self.g!r} does not have unit norm")

    def apply(self, point: SpherePoint) -> SpherePoint:
        return SpherePoint(self.g * point.u * self.g.conj())

    def inverse(self) -> Rotation:
        return Rotation(self.g.conj())

    def is_identity(self) -> bool:
        return self.g == Q1 or self.g == -Q1

    def mobius(self) -> tuple:
        """Matrix ``((a, b), (c, d))`` with ``(z0, z1) -> (a z0 + b z1, c z0 + d z1)``.

        In the coordinate ``zeta = z1/z0`` this is
        ``zeta -> (alpha zeta + beta) / (-conj(beta) zeta + conj(alpha))`` with
        ``alpha = r + I a`` and ``beta = c - I b`` for ``g = r + a i + b j + c k``.
        """
        g = self.g
        alpha = Gauss(g.r, g.i)
        beta = Gauss(g.k, -g.j)
        return ((alpha.conj(), -beta.conj()), (beta, alpha))


IDENTITY = Rotation()


@dataclass(frozen=True)
class Automorphism:
    """Element ``(a, A)`` of Sp(1).GL(k, H), acting by ``q -> a q A``."""

    a: Quaternion
    A: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(r) for r in self.A))
        if self.a.norm() != 1:
            raise InputError("automorphism scalar must have unit norm")
        k = len(self.A)
        if any(len(r) != k for r in self.A):
            raise InputError("automorphism matrix must be square")
        rows = [vector_to_real(_row_times(v, self.A)) for v in _real_unit_vectors(k)]
        if real_rank(rows, 4 * k) != 4 * k:
            raise InputError("automorphism matrix is not invertible")

    @property
    def k(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, k: int) -> Automorphism:
        return cls(Q1, tuple(tuple(Q1 if i == j else Quaternion() for j in range(k)) for i in range(k)))


def _real_unit_vectors(k: int):
    units = (Q1, QI, QJ, QK)
    zero = Quaternion()
    for s in range(k):
        for u in units:
            yield tuple(u if t == s else zero for t in range(k))


UNIT_SCALARS = (
    Q1,
    Quaternion(mpq(1, 2), mpq(1, 2), mpq(1, 2), mpq(1, 2)),
    Quaternion(mpq(3, 5), mpq(4, 5), 0, 0),
    Quaternion(mpq(3, 5), 0, mpq(4, 5), 0),
    Quaternion(0, mpq(2, 3), mpq(2, 3), mpq(1, 3)),
    Quaternion(mpq(1, 5), mpq(2, 5), mpq(2, 5), mpq(4, 5)),
)


def random_automorphism(k: int, seed: int) -> Automorphism:
    """Deterministic pseudo-random automorphism of ``H^k``.

    ``a`` is drawn uniformly from :data:`UNIT_SCALARS`.  ``A`` is the identity
    plus, independently for each entry with probability 1/3, a quaternion
    whose four coordinates are uniform integers in [-2, 2]; draws are
    repeated until ``A`` is invertible.
    """
    rng = random.Random(seed)
    a = rng.choice(UNIT_SCALARS)
    while True:
        A = []
        for i in range(k):
            row = []
            for j in range(k):
                q = Q1 if i == j else Quaternion()
                if rng.random() < 1 / 3:
                    q = q + Quaternion(*(rng.randint(-2, 2) for _ in range(4)))
                row.append(q)
            A.append(tuple(row))
        try:
            return Automorphism(a, tuple(A))
        except InputError:
            continue


# --- model pairs ----------------------------------------------------------------


def gen_U(k: int, zetas=None) -> Pair:
    """``U_k = R^(k+1) + R e_1 + ... + R e_k`` in ``H^(k+1)``, of dimension 2k+1."""
    if k < 0:
        raise InputError("k must be nonnegative")
    if zetas is None:
        zetas = list(range(k + 1))
    if len(zetas) != k + 1:
        raise InputError(f"gen_U({k}) needs {k + 1} parameters")
    qs = [sphere_point_from_zeta(z) for z in zetas]
    for a in range(len(qs)):
        for b in range(a + 1, len(qs)):
            if qs[a].u == qs[b].u or qs[a].u == -qs[b].u:
                raise InputError(f"parameters {a} and {b} give equal or antipodal points")
    n = k + 1
    zero = Quaternion()
    basis = [tuple(Q1 if t == s else zero for t in range(n)) for s in range(n)]
    for j in range(k):
        basis.append(tuple(qs[j].u if t == j else qs[j + 1].u if t == j + 1 else zero for t in range(n)))
    return validate(Pair(n, basis))


def gen_V(k: int) -> Pair:
    """``V_k`` in ``H^(2k+1)``: image of ``C^(2k)`` under the alternating conjugate parametrization."""
    if k < 0:
        raise InputError("k must be nonnegative")
    n = 2 * k + 1
    if k == 0:
        return Pair.zero(1)
    basis = []
    for idx in range(2 * k):
        for part in (0, 1):
            z = [(0, 0)] * (2 * k)
            z[idx] = (1, 0) if part == 0 else (0, 1)
            basis.append(_v_point(k, z))
    return validate(Pair(n, basis))


def _v_point(k: int, z) -> tuple:
    """Evaluate the V_k parametrization; ``z[m] = (x, y)`` stands for ``x + y i``."""

    def c(m):
        x, y = z[m]
        return Quaternion(x, y, 0, 0)

    def cbar(m):
        x, y = z[m]
        return Quaternion(x, -y, 0, 0)

    slots = [c(0)]
    for s in range(1, k + 1):
        slots.append(cbar(2 * s - 2) + c(2 * s - 1) * QJ)
        if s < k:
            slots.append(c(2 * s) - cbar(2 * s - 1) * QJ)
        else:
            slots.append(-(cbar(2 * s - 1) * QJ))
    return tuple(slots)


def gen_W(k: int, q: SpherePoint) -> Pair:
    """``W_{k,q}`` in ``H^k``: vectors ``(a_s + b_s q + b_{s+1} aux)_s``, dimension 2k."""
    if k < 1:
        raise InputError("W_{k,q} needs k >= 1")
    aux = QJ if q.u in (QI, -QI) else QI
    zero = Quaternion()
    basis = []
    for s in range(k):
        basis.append(tuple(Q1 if t == s else zero for t in range(k)))
        basis.append(tuple(q.u if t == s else aux if t == s - 1 else zero for t in range(k)))
    return validate(Pair(k, basis))


# --- the complex warm-up ---------------------------------------------------------


@dataclass(frozen=True)
class ComplexPair:
    """A real subspace of ``C^n``; real coordinates are (re, im) per slot."""

    n: int
    basis: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "basis", tuple(tuple(Gauss.coerce(x) for x in v) for v in self.basis)
        )

    def real_rows(self) -> list:
        return [[c for x in v for c in (x.re, x.im)] for v in self.basis]

    def validated(self) -> ComplexPair:
        if any(len(v) != self.n for v in self.basis):
            raise InputError("complex basis vector has the wrong length")
        rows = self.real_rows()
        reduced, _ = real_rref(rows, 2 * self.n)
        if len(reduced) != len(rows):
            raise InputError("dependent basis")
        basis = [tuple(Gauss(r[2 * s], r[2 * s + 1]) for s in range(self.n)) for r in reduced]
        return ComplexPair(self.n, basis)


def complex_decompose(cp: ComplexPair) -> tuple[int, int, int]:
    """Multiplicities ``(m, l, z)`` of the factors (C, C), (R, C), (0, C)."""
    rows = cp.real_rows()
    dim = real_rank(rows, 2 * cp.n)
    jrows = [[c for x in v for c in ((I * x).re, (I * x).im)] for v in cp.basis]
    both = real_rank(rows + jrows, 2 * cp.n)
    m = (2 * dim - both) // 2
    l = dim - 2 * m
    return m, l, cp.n - m - l


def complex_view(p: Pair, J: SpherePoint) -> ComplexPair:
    """``U`` as a real subspace of ``(H^k, J) = C^(2k)``.

    Each slot uses the complex basis ``(1, f)`` where ``f`` is the first of
    ``j, k, i`` outside ``span(1, J)``, so the real frame is ``(1, J, f, J f)``.
    """
    u = J.u
    f = next(e for e in (QJ, QK, QI) if real_rank([[1, 0, 0, 0], list(u.coords()), list(e.coords())], 4) == 3)
    frame = [q.coords() for q in (Q1, u, f, u * f)]
    # invert the frame: rows of [frame^T | Id] reduce to [Id | frame^-T]
    aug = [[frame[c][r] for c in range(4)] + [mpq(int(r == s)) for s in range(4)] for r in range(4)]
    inv = [row[4:] for row in real_rref(aug, 8)[0]]
    basis = []
    for v in p.basis:
        out = []
        for q in v:
            x = q.coords()
            a, b, c, d = (sum(inv[r][s] * x[s] for s in range(4)) for r in range(4))
            out.extend([Gauss(a, b), Gauss(c, d)])
        basis.append(tuple(out))
    return ComplexPair(2 * p.k, basis)


__all__ += ["IDENTITY", "UNIT_SCALARS", "antipodal_zeta", "complex_view", "vector_to_real"]
