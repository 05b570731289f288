"""Splitting types and torsion of the kernel and cokernel sheaves of a pencil.

A pencil ``P = z0 A + z1 B`` is a morphism ``O(-1)^n -> O^m`` on the
projective line.  Its kernel is a vector bundle ``sum O(-a)``, its cokernel
is a vector bundle ``sum O(b)`` plus a torsion sheaf.  Kernel degrees are
read off the dimensions of global sections of the twists, cokernel degrees
off the kernel of the transposed pencil, and torsion off the Smith form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import reduce

import flint
import gmpy2
import mpmath

from .errors import ConsistencyError
from .exact import BinaryForm, Gauss, PolyMatrix, irreducible_factors, multiplicity, smith_form
from .exact.linalg import MatrixG
from .exact.numbers import Quaternion
from .exact.polys import coprime_basis, gcd_forms, linear_form_at, p_monic
from .pairs import IDENTITY, Rotation, SpherePoint, sphere_point_from_zeta
from .pencil import CP1Point, Pencil

__all__ = [
    "SheafSignature",
    "TorsionOrbit",
    "graded_nullity",
    "kernel_splitting",
    "cokernel_free_splitting",
    "generic_rank",
    "rotation_attempts",
    "rotate_generic",
    "torsion_invariants",
    "sigma_twist",
    "sheaf_signature",
    "support_form_of",
    "rational_support",
    "determinantal_divisor",
    "local_partition",
]


# --- graded nullity ---------------------------------------------------------------


def _integer_parts(P: Pencil) -> tuple[list, list, list, list]:
    """Real and imaginary parts of ``A`` and ``B`` scaled by one common denominator."""
    entries = [x for M in (P.A, P.B) for row in M.rows for x in row]
    den = reduce(
        gmpy2.lcm,
        (q.denominator for x in entries for q in (x.re, x.im)),
        gmpy2.mpz(1),
    )

    def part(M, attr):
        return [[int(getattr(x, attr) * den) for x in row] for row in M.rows]

    return part(P.A, "re"), part(P.A, "im"), part(P.B, "re"), part(P.B, "im")


def _graded_rank(parts, m: int, n: int, d: int) -> int:
    """Complex rank of multiplication by the pencil from degree ``d-1`` to degree ``d``."""
    ar, ai, br, bi = parts
    rows, cols = m * (d + 1), n * d
    R, C = 2 * rows, 2 * cols
    flat = [0] * (R * C)

    def put(i, j, xr, xi):
        # [[X, -Y], [Y, X]] block layout
        flat[i * C + j] = xr
        flat[i * C + cols + j] = -xi
        flat[(rows + i) * C + j] = xi
        flat[(rows + i) * C + cols + j] = xr

    for t in range(d + 1):
        for s, (mr, mi) in ((t, (ar, ai)), (t - 1, (br, bi))):
            if not 0 <= s < d:
                continue
            for a in range(m):
                ra, ia = mr[a], mi[a]
                for b in range(n):
                    if ra[b] or ia[b]:
                        put(t * m + a, s * n + b, ra[b], ia[b])
    if not R or not C:
        return 0
    return flint.fmpz_mat(R, C, flat).rank() // 2


def graded_nullity(P: Pencil, d: int, _parts=None) -> int:
    """Dimension of the sections of ``ker P`` twisted by ``O(d)``.

    The unknowns are the ``d`` coefficient vectors of a degree ``d-1``
    section of ``O(-1)^n (d)``; the equations are the ``d+1`` coefficients of
    its image under multiplication by ``z0 A + z1 B``.
    """
    if d < 0:
        raise ValueError("twist must be nonnegative")
    if d == 0:
        return 0
    parts = _parts if _parts is not None else _integer_parts(P)
    return P.n * d - _graded_rank(parts, P.m, P.n, d)


def _splitting(P: Pencil, kernel_rank: int, bound: int) -> list[int]:
    """Degrees ``a`` with ``ker P = sum O(-a)``, from first differences of the nullity."""
    if kernel_rank == 0:
        return []
    parts = _integer_parts(P)
    counts = []
    previous_nullity, previous_jumps = 0, 0
    for d in range(1, bound + 1):
        nullity = graded_nullity(P, d, parts)
        jumps = nullity - previous_nullity
        if jumps < previous_jumps or jumps > kernel_rank:
            raise ConsistencyError(f"inconsistent nullity profile at twist {d}")
        counts.extend([d] * (jumps - previous_jumps))
        if jumps == kernel_rank:
            return counts
        previous_nullity, previous_jumps = nullity, jumps
    raise ConsistencyError(
        f"kernel rank {kernel_rank} not exhausted by twist {bound}: found {len(counts)} summands"
    )


def kernel_splitting(P: Pencil, rank: int | None = None) -> list[int]:
    """Kernel degrees ``-a`` (all at most -1), sorted in increasing order."""
    r = generic_rank(P) if rank is None else rank
    degrees = _splitting(P, P.n - r, 2 * P.k + 1)
    if sum(degrees) > 2 * P.k:
        raise ConsistencyError("kernel degrees exceed the degree bound")
    return sorted(-a for a in degrees)


def cokernel_free_splitting(P: Pencil, rank: int | None = None) -> list[int]:
    """Degrees of the free part of the cokernel (all at least 1), sorted."""
    r = generic_rank(P) if rank is None else rank
    degrees = _splitting(P.transpose(), P.m - r, 2 * P.k + 1)
    out = [b - 1 for b in degrees]
    if 0 in out:
        raise ConsistencyError("trivial summand O in the cokernel")
    return sorted(out)


def sample_points(count: int) -> list[CP1Point]:
    """``zeta = 0, 1, 2, ...``: pairwise distinct and never antipodal."""
    return [CP1Point.from_zeta(z) for z in range(count)]


def generic_rank(P: Pencil) -> int:
    """Rank of the pencil over the function field.

    The rank drops at no more than ``2k`` points, so the maximum over
    ``2k + 1`` distinct sample points is the generic value.
    """
    top = min(P.m, P.n)
    best = 0
    for x in sample_points(2 * P.k + 1):
        best = max(best, P.at(x).rank())
        if best == top:
            break
    return best


# --- torsion ------------------------------------------------------------------------


def sigma_twist(f: BinaryForm) -> BinaryForm:
    """``z -> conj(f(-conj z1, conj z0))``; vanishes exactly at the antipodes of the zeros of f."""
    d = f.degree
    c = f.coeffs
    return BinaryForm([c[d - s].conj() * (-1) ** s for s in range(d + 1)], d)


@dataclass(frozen=True)
class TorsionOrbit:
    """Torsion supported on a sigma-stable set of points.

    ``support_form`` is the normalized form vanishing simply on the support
    (a product of Galois- and antipode-conjugate points), of degree ``2m``.
    ``partition`` lists the local lengths at each support point, one entry
    per invariant factor involved, in nonincreasing order.
    """

    support_form: BinaryForm
    partition: tuple
    numeric_support: tuple = field(default=(), compare=False)

    @property
    def degree(self) -> int:
        return self.support_form.degree

    @property
    def point_pairs(self) -> int:
        return self.degree // 2

    @property
    def length(self) -> int:
        return self.degree * sum(self.partition)

    def sort_key(self):
        return (self.support_form.sort_key(), tuple(-p for p in self.partition))

    def rational_points(self):
        """The support points as exact sphere points, or ``None`` if not rational."""
        return rational_support(self.support_form)

    def rotated(self, rotation: Rotation) -> TorsionOrbit:
        """Orbit of the pair moved by ``q -> g q g^-1``."""
        (a, b), (c, d) = rotation.mobius()
        inverse = ((d, -b), (-c, a))
        form = self.support_form.substitute(inverse).normalized()
        return TorsionOrbit(form, self.partition, numeric_roots(form))


def support_form_of(q: SpherePoint) -> BinaryForm:
    """Normalized quadratic form vanishing at ``q`` and ``-q``."""
    return (linear_form_at(q.zeta()) * linear_form_at(q.antipode().zeta())).normalized()


def rational_support(form: BinaryForm):
    """Support points as exact sphere points, or ``None`` when some root is irrational."""
    points = []
    for factor, _ in irreducible_factors(form):
        if factor.degree != 1:
            return None
        points.append(sphere_point_from_zeta(_linear_root(factor)))
    return points


def _linear_root(f: BinaryForm):
    a, b = f.coeffs  # a z0 + b z1
    if not b:
        return None
    return -a / b


def numeric_roots(form: BinaryForm) -> tuple:
    """Approximate support points as unit 3-vectors (reporting only)."""
    out = []
    inf = form.infinity_order()
    out.extend([(-1.0, 0.0, 0.0)] * inf)
    poly = form.dehomogenize()
    if len(poly) > 1:
        with mpmath.workdps(40):
            coeffs = [mpmath.mpc(_mpf(c.re), _mpf(c.im)) for c in reversed(poly)]
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
            for z in roots:
                x, y = mpmath.re(z), mpmath.im(z)
                den = 1 + x * x + y * y
                out.append((float((1 - x * x - y * y) / den), float(2 * x / den), float(2 * y / den)))
    return tuple(sorted(out))


def _mpf(q):
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def rotation_attempts():
    """Identity, then the rational rotations ``((n^2-1) + 2n j) / (n^2+1)``, n = 2, 3, ..."""
    yield IDENTITY
    n = 2
    while True:
        den = n * n + 1
        yield Rotation(Quaternion(gmpy2.mpq(n * n - 1, den), 0, gmpy2.mpq(2 * n, den), 0))
        n += 1


def rotate_generic(P: Pencil, rank: int | None = None) -> tuple[Pencil, Rotation]:
    """Precompose with rotations until ``[0:1]`` is a point of generic rank."""
    r = generic_rank(P) if rank is None else rank
    infinity = CP1Point.from_zeta(None)
    for attempt, rotation in enumerate(rotation_attempts()):
        if attempt > 2 * P.k + 1:
            break
        Q = P if rotation.is_identity() else P.substitute(rotation.mobius())
        if Q.at(infinity).rank() == r:
            return Q, rotation
    raise ConsistencyError("no rotation in the attempt list makes infinity generic")


def invariant_factor_forms(P: Pencil, rank: int | None = None) -> list[BinaryForm]:
    """Homogeneous invariant factors of positive degree, in divisibility order."""
    r = generic_rank(P) if rank is None else rank
    Q, rotation = rotate_generic(P, r)
    factors = smith_form(PolyMatrix.from_pencil(Q.A, Q.B))
    if len(factors) != r:
        raise ConsistencyError("Smith form rank differs from the generic rank")
    (a, b), (c, d) = rotation.mobius()
    det = a * d - b * c
    inverse = ((d / det, -b / det), (-c / det, a / det))
    out = []
    for f in factors:
        if len(f) > 1:
            form = BinaryForm.homogenize(f)
            if not rotation.is_identity():
                form = form.substitute(inverse)
            out.append(form.normalized())
    return out


def _orbits(irreducibles, partition_of) -> list[TorsionOrbit]:
    """Group irreducible supports into antipodal orbits and check the pairing."""
    irreducibles = sorted(set(f.normalized() for f in irreducibles), key=BinaryForm.sort_key)
    orbits, seen = [], set()
    for b in irreducibles:
        if b in seen:
            continue
        partner = sigma_twist(b).normalized()
        if partner not in irreducibles:
            raise ConsistencyError(f"antipodal partner of the torsion factor {b} is missing")
        seen.update((b, partner))
        partition = partition_of(b)
        if partner != b and partition != partition_of(partner):
            raise ConsistencyError(f"torsion at {b} and its antipode have different lengths")
        support = b if partner == b else (b * partner).normalized()
        orbits.append(TorsionOrbit(support, partition, numeric_roots(support)))
    return sorted(orbits, key=TorsionOrbit.sort_key)


def torsion_invariants(P: Pencil, rank: int | None = None, method: str = "local") -> list[TorsionOrbit]:
    """Torsion of the cokernel grouped into orbits under the antipodal conjugation.

    ``method="local"`` finds the support from the determinantal divisor and
    the partitions from local rank profiles; ``method="smith"`` reads both
    off the Smith form of a rotated pencil.  They agree; the local method
    avoids the coefficient growth of polynomial elimination.
    """
    r = generic_rank(P) if rank is None else rank
    if method == "smith":
        forms = invariant_factor_forms(P, r)
        if not forms:
            return []
        irreducibles = []
        for b in coprime_basis(forms):
            irreducibles.extend(f for f, _ in irreducible_factors(b))

        def partition_of(b):
            return tuple(e for e in (multiplicity(b, f) for f in reversed(forms)) if e)

        return _orbits(irreducibles, partition_of)
    if method != "local":
        raise ValueError(f"unknown torsion method {method!r}")
    divisor = determinantal_divisor(P, r)
    if divisor.degree == 0:
        return []
    factors = dict(irreducible_factors(divisor))

    def partition_of(b):
        return local_partition(P, b, factors[b], r)

    return _orbits(list(factors), partition_of)


def expected_torsion_length(P: Pencil, kernel, cokernel) -> int:
    """Torsion length forced by ``c1(coker) - c1(ker) = n``."""
    return P.n - sum(cokernel) + sum(kernel)


def _gauss_det(rows) -> Gauss:
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Gauss(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return Gauss(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        pivot = rows[c][c]
        det = det * pivot
        inv = pivot.inverse()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def _interpolate(xs, ys) -> list:
    """Coefficients (low degree first) of the polynomial through the points."""
    coeffs = [Gauss(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = [Gauss(1)]
        den = Gauss(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Gauss(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] = basis[t] - xj * basis[t + 1]
            den = den * (xi - xj)
        scale = yi / den
        for t, b in enumerate(basis):
            coeffs[t] = coeffs[t] + scale * b
    return coeffs


def _projection_determinant(P: Pencil, r: int, X, Y) -> BinaryForm:
    """``det(X P Y)`` as a binary form of degree ``r``."""
    XA, XB = X @ P.A @ Y, X @ P.B @ Y
    xs = [Gauss(t) for t in range(r + 1)]
    ys = [_gauss_det((XA + XB.scale(t)).rows) for t in xs]
    return BinaryForm(_interpolate(xs, ys), r)


def determinantal_divisor(P: Pencil, rank: int | None = None, expected: int | None = None) -> BinaryForm:
    """Normalized gcd of the ``r x r`` minors of the pencil.

    Computed as the gcd of ``det(X P Y)`` over seeded random integer
    projections ``X``, ``Y``; each is a multiple of the divisor, and the
    search stops once the degree reaches the torsion length forced by the
    splitting (or, without that, once three projections agree).
    """
    import random

    r = generic_rank(P) if rank is None else rank
    if r == 0:
        return BinaryForm.constant()
    rng = random.Random(20240917)
    g = None
    agree = 0
    for _ in range(24):
        X = MatrixG([[rng.randint(-3, 3) for _ in range(P.m)] for _ in range(r)], P.m)
        Y = MatrixG([[rng.randint(-3, 3) for _ in range(r)] for _ in range(P.n)], r)
        d = _projection_determinant(P, r, X, Y)
        if d.is_zero():
            continue
        new = d.normalized() if g is None else gcd_forms(g, d)
        agree = agree + 1 if g is not None and new.degree == g.degree else 0
        g = new
        if expected is not None and g.degree == expected:
            return g
        if expected is None and agree >= 3:
            return g
        if expected is not None and g.degree < expected:
            break
    raise ConsistencyError(
        "determinantal divisor does not match the torsion length forced by the splitting"
    )


def _companion(poly) -> MatrixG:
    """Companion matrix of a monic polynomial (coefficients low degree first)."""
    d = len(poly) - 1
    rows = [[Gauss(0)] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = Gauss(1)
    for i in range(d):
        rows[i][d - 1] = -poly[i]
    return MatrixG(rows, d)


def _kron(M: MatrixG, N: MatrixG) -> MatrixG:
    rows = []
    for a in M.rows:
        for b in N.rows:
            rows.append([x * y for x in a for y in b])
    return MatrixG(rows, M.ncols * N.ncols)


def _jordan_chain_dims(L0: MatrixG, L1: MatrixG, length: int) -> list[int]:
    """Kernel dimensions of the block Toeplitz matrices ``[[L0], [L1, L0], ...]``."""
    m, n = L0.shape
    dims = [0]
    for j in range(1, length + 1):
        rows = []
        for bi in range(j):
            for a in range(m):
                row = []
                for bj in range(j):
                    block = L0 if bi == bj else L1 if bi == bj + 1 else None
                    row.extend(block.rows[a] if block is not None else [Gauss(0)] * n)
                rows.append(row)
        dims.append(n * j - MatrixG(rows, n * j).rank())
    return dims


def local_partition(P: Pencil, b: BinaryForm, multiplicity: int, rank: int) -> tuple:
    """Sizes of the elementary divisors at the roots of the irreducible form ``b``.

    At a root ``lam`` of ``L(t) = L0 + t L1`` the space of Jordan chains of
    length ``j`` has dimension ``j (n - r) + sum_i min(e_i, j)``.  For roots
    outside ``Q(i)`` the computation is done over ``Q(i)`` with ``lam``
    replaced by the companion matrix of ``b``, which multiplies every
    dimension by ``deg b``.
    """
    if b.infinity_order():
        if b.degree != 1:
            raise ConsistencyError("irreducible form divisible by z0 must be z0")
        L0, L1, delta = P.B, P.A, 1
    else:
        poly = p_monic(b.dehomogenize())
        delta = len(poly) - 1
        C = _companion(poly)
        Id = MatrixG.identity(delta)
        L0 = _kron(P.A, Id) + _kron(P.B, C)
        L1 = _kron(P.B, Id)
    dims = _jordan_chain_dims(L0, L1, multiplicity + 1)
    free = (P.n - rank) * delta
    at_least = [(dims[j] - dims[j - 1] - free) for j in range(1, multiplicity + 2)]
    if any(x % delta for x in at_least):
        raise ConsistencyError("local rank profile is not a multiple of the support degree")
    at_least = [x // delta for x in at_least]
    if at_least[-1] != 0 or any(a < c for a, c in zip(at_least, at_least[1:])):
        raise ConsistencyError(f"inconsistent local rank profile at {b}")
    sizes = []
    for j in range(1, multiplicity + 1):
        sizes.extend([j] * (at_least[j - 1] - at_least[j]))
    sizes = tuple(sorted(sizes, reverse=True))
    if sum(sizes) != multiplicity:
        raise ConsistencyError(f"local lengths at {b} do not add up to its multiplicity")
    return sizes


# --- the signature ------------------------------------------------------------------


@dataclass(frozen=True)
class SheafSignature:
    """Kernel degrees, free cokernel degrees and torsion orbits of a pair's sheaf."""

    kernel_degrees: tuple
    cokernel_degrees: tuple
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kernel_degrees", tuple(sorted(self.kernel_degrees)))
        object.__setattr__(self, "cokernel_degrees", tuple(sorted(self.cokernel_degrees)))
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion, key=TorsionOrbit.sort_key)))

    @property
    def torsion_length(self) -> int:
        return sum(o.length for o in self.torsion)

    def check(self, k: int, dim_u: int) -> None:
        """Raise :class:`ConsistencyError` unless every signature identity holds."""
        problems = signature_violations(self, k, dim_u)
        if problems:
            raise ConsistencyError("; ".join(problems))

    def rotated(self, rotation: Rotation) -> SheafSignature:
        return SheafSignature(
            self.kernel_degrees,
            self.cokernel_degrees,
            tuple(o.rotated(rotation) for o in self.torsion),
        )


def signature_violations(s: SheafSignature, k: int, dim_u: int) -> list[str]:
    problems = []
    if len(s.cokernel_degrees) - len(s.kernel_degrees) != 2 * k - dim_u:
        problems.append("rank identity fails")
    if sum(s.cokernel_degrees) + s.torsion_length - sum(s.kernel_degrees) != 2 * k:
        problems.append("degree identity fails")
    if 0 in s.kernel_degrees or 0 in s.cokernel_degrees:
        problems.append("trivial summand present")
    if any(d > -1 for d in s.kernel_degrees) or any(d < 1 for d in s.cokernel_degrees):
        problems.append("degree of the wrong sign")
    for degrees in (s.kernel_degrees, s.cokernel_degrees):
        for d, mult in Counter(degrees).items():
            if d % 2 and mult % 2:
                problems.append(f"odd degree {d} has odd multiplicity")
    for o in s.torsion:
        if o.degree < 2 or o.degree % 2:
            problems.append("torsion support of odd degree")
        elif not sigma_twist(o.support_form).same_up_to_scalar(o.support_form):
            problems.append("torsion support is not antipodally closed")
        if not o.partition or any(p < 1 for p in o.partition):
            problems.append("empty torsion partition")
    return problems


def sheaf_signature(P: Pencil) -> SheafSignature:
    """All sheaf invariants of the pencil, with every identity verified."""
    r = generic_rank(P)
    kernel = kernel_splitting(P, r)
    cokernel = cokernel_free_splitting(P, r)
    expected_torsion = expected_torsion_length(P, kernel, cokernel)
    divisor = determinantal_divisor(P, r, expected_torsion)
    factors = dict(irreducible_factors(divisor)) if divisor.degree else {}
    torsion = _orbits(list(factors), lambda b: local_partition(P, b, factors[b], r))
    s = SheafSignature(tuple(kernel), tuple(cokernel), tuple(torsion))
    if s.torsion_length != expected_torsion:
        raise ConsistencyError(
            f"torsion length {s.torsion_length} differs from the {expected_torsion} forced by the splitting"
        )
    s.check(P.k, 4 * P.k - P.m)
    return s
