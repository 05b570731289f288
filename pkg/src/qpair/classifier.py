"""Decomposition of a pair into indecomposable model pairs.

The sheaf signature determines the factors: a free cokernel summand
``O(2d+2)`` is one ``U(d)``, a pair ``2 O(2d+1)`` is one ``V(d)``, the kernel
summands give the duals, and each torsion orbit of support degree ``2m``
contributes ``m`` factors ``W(k_j)`` per partition entry ``k_j``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConsistencyError, InputError
from .exact import BinaryForm, Gauss, MatrixG, irreducible_factors
from .exact.linalg import real_intersection, real_rank, real_rref, real_sum
from .exact.numbers import QI, QJ, QK, Quaternion
from .exact.polys import p_monic
from .pairs import Pair, dual, gen_U, gen_V, gen_W, product, validate
from .pencil import CP1Point, Pencil, build_pencil, eigensection_check, eigensections, reality_check
from .sheaf import (
    SheafSignature,
    _companion,
    _kron,
    generic_rank,
    rational_support,
    sheaf_signature,
    signature_violations,
)

__all__ = [
    "Factor",
    "FactorSignature",
    "Classification",
    "Filtration",
    "factor_signature",
    "classify",
    "dual_signature",
    "canonical_filtration",
    "is_augmented",
    "is_strengthened",
    "model_from_signature",
    "factor_dimensions",
    "check_conventions",
]

KINDS = ("U", "Ustar", "V", "Vstar", "W")

# (quaternionic dimension, real subspace dimension) of each model
_DIMENSIONS = {
    "U": lambda k: (k + 1, 2 * k + 1),
    "Ustar": lambda k: (k + 1, 2 * k + 3),
    "V": lambda k: (2 * k + 1, 4 * k),
    "Vstar": lambda k: (2 * k + 1, 4 * k + 4),
    "W": lambda k: (k, 2 * k),
}


@dataclass(frozen=True)
class Factor:
    """One indecomposable model pair; ``support`` is set for ``W`` factors only."""

    kind: str
    k: int
    support: BinaryForm | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown factor type {self.kind!r}")
        if (self.kind == "W") != (self.support is not None):
            raise InputError("exactly the W factors carry a support")
        if self.k < (1 if self.kind == "W" else 0):
            raise InputError(f"{self.kind}({self.k}) is not a model pair")

    def sort_key(self):
        support = self.support.sort_key() if self.support is not None else ()
        return (KINDS.index(self.kind), self.k, support)

    def dimensions(self) -> tuple[int, int]:
        return _DIMENSIONS[self.kind](self.k)

    def dual(self) -> Factor:
        swap = {"U": "Ustar", "Ustar": "U", "V": "Vstar", "Vstar": "V", "W": "W"}
        return Factor(swap[self.kind], self.k, self.support)

    def __str__(self):
        if self.kind == "W":
            return f"W({self.k}, {self.support})"
        return f"{self.kind}({self.k})"


@dataclass(frozen=True)
class FactorSignature:
    """Multiset of factors, stored as a canonically sorted tuple."""

    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=Factor.sort_key)))

    def counts(self) -> list[tuple[Factor, int]]:
        c = Counter(self.factors)
        return sorted(c.items(), key=lambda fm: fm[0].sort_key())

    def __add__(self, other: FactorSignature) -> FactorSignature:
        return FactorSignature(self.factors + other.factors)

    def dimensions(self) -> tuple[int, int]:
        return factor_dimensions(self)

    def __str__(self):
        return " x ".join(f"{f}^{m}" if m > 1 else str(f) for f, m in self.counts()) or "(0, 0)"


@dataclass(frozen=True)
class Classification:
    sheaf: SheafSignature
    factors: FactorSignature


@dataclass(frozen=True)
class Filtration:
    """``(U-, E-) <= (U_mid, E_mid) <= (U, E)`` as reduced real bases.

    ``(U_mid, E_mid)`` is the product of the CR part ``(U-, E-)`` with the
    torsion part; ``dims`` holds the four real dimensions.
    """

    dims: dict
    E_minus: tuple = ()
    U_minus: tuple = ()
    E_mid: tuple = ()
    U_mid: tuple = ()


def factor_dimensions(f: FactorSignature) -> tuple[int, int]:
    k = dim = 0
    for factor in f.factors:
        a, b = factor.dimensions()
        k += a
        dim += b
    return k, dim


def factor_signature(s: SheafSignature) -> FactorSignature:
    """Read the factors off a sheaf signature."""
    out = []
    for degrees, sign, even_kind, odd_kind in (
        (s.cokernel_degrees, 1, "U", "V"),
        (s.kernel_degrees, -1, "Ustar", "Vstar"),
    ):
        for d, mult in Counter(sign * x for x in degrees).items():
            if d < 1:
                raise ConsistencyError(f"degree {sign * d} cannot occur")
            if d % 2 == 0:
                out.extend([Factor(even_kind, (d - 2) // 2)] * mult)
            else:
                if mult % 2:
                    raise ConsistencyError(f"odd degree {sign * d} with odd multiplicity")
                out.extend([Factor(odd_kind, (d - 1) // 2)] * (mult // 2))
    for orbit in s.torsion:
        for k in orbit.partition:
            out.extend([Factor("W", k, orbit.support_form)] * orbit.point_pairs)
    return FactorSignature(tuple(out))


def dual_signature(f: FactorSignature) -> FactorSignature:
    return FactorSignature(tuple(x.dual() for x in f.factors))


def is_augmented(f: FactorSignature) -> bool:
    """No ``(H, H)`` factor, i.e. no summand of Chern number -1."""
    return Factor("Vstar", 0) not in f.factors


def is_strengthened(f: FactorSignature) -> bool:
    """No ``(0, H)`` factor, i.e. no summand of Chern number +1."""
    return Factor("V", 0) not in f.factors


# --- classification ----------------------------------------------------------------

CHECK_POINTS = (0, 1, None, Gauss(1, 1) / 2)


@lru_cache(maxsize=64)
def check_conventions(k: int) -> None:
    """Verify the eigensection conventions for ``H^k`` (cached per k)."""
    for zeta in CHECK_POINTS:
        eigensection_check(k, zeta)


def classify(p: Pair) -> Classification:
    """Sheaf signature and factor decomposition of a pair."""
    p = validate(p)
    check_conventions(p.k)
    P = build_pencil(p)
    reality_check(P)
    s = sheaf_signature(P)
    f = factor_signature(s)
    if factor_dimensions(f) != (p.k, p.dim):
        raise ConsistencyError(
            f"factors {f} reconstruct {factor_dimensions(f)}, expected {(p.k, p.dim)}"
        )
    return Classification(s, f)


# --- models ----------------------------------------------------------------------------


def model_factor(f: Factor) -> Pair:
    if f.kind == "U":
        return gen_U(f.k)
    if f.kind == "Ustar":
        return dual(gen_U(f.k))
    if f.kind == "V":
        return gen_V(f.k)
    if f.kind == "Vstar":
        return dual(gen_V(f.k))
    points = rational_support(f.support)
    if points is None or f.support.degree != 2:
        raise InputError(f"W support {f.support} is not a rational antipodal pair")
    return gen_W(f.k, points[0])


def model_from_signature(f: FactorSignature) -> Pair:
    """Product of model pairs realizing ``f``, in canonical factor order."""
    out = Pair.zero(0)
    for factor in f.factors:
        out = product(out, model_factor(factor))
    return out


# --- the canonical filtration ------------------------------------------------------


def predicted_dims(f: FactorSignature) -> dict:
    e_minus = u_minus = e_t = u_t = 0
    for factor in f.factors:
        k, dim = factor.dimensions()
        if factor.kind in ("Ustar", "Vstar"):
            e_minus += 4 * k
            u_minus += dim
        elif factor.kind == "W":
            e_t += 4 * k
            u_t += dim
    return {
        "E_minus": e_minus,
        "U_minus": u_minus,
        "E_mid": e_minus + e_t,
        "U_mid": u_minus + u_t,
    }


def _quaternionic_span(rows, k: int) -> list:
    out = []
    for row in rows:
        v = [row[4 * s : 4 * s + 4] for s in range(k)]
        out.append(list(row))
        for unit in (QI, QJ, QK):
            w = []
            for q in v:
                x = unit * _quat(q)
                w.extend(x.coords())
            out.append(w)
    return real_rref(out, 4 * k)[0]


def _quat(coords):
    return Quaternion.from_coords(coords)


def _left_mult_rows(rows, u, k: int) -> list:
    out = []
    for row in rows:
        w = []
        for s in range(k):
            w.extend((u * _quat(row[4 * s : 4 * s + 4])).coords())
        out.append(w)
    return out


def _cr_part(P: Pencil, p: Pair, rank: int) -> list:
    """Real basis of the subspace whose complexification is spanned by the fibre kernels."""
    k = p.k
    V, W = eigensections(k)
    span: list = []
    span_rank = 0
    good = stale = 0
    zeta = 0
    while good < 2 * k + 1 or stale < 3:
        x = CP1Point.from_zeta(zeta)
        zeta += 1
        M = P.at(x)
        if M.rank() != rank:
            continue
        good += 1
        S = V.scale(x.z0) + W.scale(x.z1)
        new = [S.apply(c) for c in M.kernel_basis()]
        candidate = span + [list(v) for v in new]
        r = MatrixG(candidate, 4 * k).rank() if candidate else 0
        if r > span_rank:
            span = [list(row) for row in MatrixG(candidate, 4 * k).rref()[0]]
            span_rank = r
            stale = 0
        else:
            stale += 1
        if zeta > 8 * k + 16:
            break
    real_rows = [[x.re for x in v] for v in span] + [[x.im for x in v] for v in span]
    real = real_rref(real_rows, 4 * k)[0] if real_rows else []
    if len(real) != span_rank:
        raise ConsistencyError("span of the fibre kernels is not stable under conjugation")
    return real


def _torsion_directions(X: Pair, b: BinaryForm) -> list:
    """Real basis of the sum of ``X & J X`` over the structures ``J`` at the roots of ``b``.

    Irrational roots are handled over Q(i) by substituting the companion
    matrix of ``b`` for the root: the columns of the resulting kernel
    vectors span the sum of the fibre kernels over all conjugate roots.
    """
    k = X.k
    P = build_pencil(X)
    V, W = eigensections(k)
    if b.infinity_order():
        kernel = P.B.kernel_basis()
        columns = [W.apply(x) for x in kernel]
    else:
        poly = p_monic(b.dehomogenize())
        delta = len(poly) - 1
        C = _companion(poly)
        Id = MatrixG.identity(delta)
        L = _kron(P.A, Id) + _kron(P.B, C)
        S = _kron(V, Id) + _kron(W, C)
        columns = []
        for x in L.kernel_basis():
            y = S.apply(x)
            columns.extend(tuple(y[r * delta + c] for r in range(4 * k)) for c in range(delta))
    real_rows = [[z.re for z in v] for v in columns] + [[z.im for z in v] for v in columns]
    return real_rref(real_rows, 4 * k)[0] if real_rows else []


def canonical_filtration(p: Pair, s: SheafSignature | None = None) -> Filtration:
    """The subpairs ``(U-, E-)`` and ``(U-, E-) x (U_t, E_t)`` with a dimension certificate."""
    p = validate(p)
    k, n = p.k, 4 * p.k
    if s is None:
        s = classify(p).sheaf
    f = factor_signature(s)
    predicted = predicted_dims(f)
    P = build_pencil(p)
    rank = generic_rank(P)
    U = p.real_rows()

    cr = _cr_part(P, p, rank) if k else []
    E_minus = _quaternionic_span(cr, k) if cr else []
    U_minus = real_intersection(U, E_minus, n) if E_minus else []

    dims = {"E_minus": len(E_minus), "U_minus": len(U_minus)}
    for key in ("E_minus", "U_minus"):
        if dims[key] != predicted[key]:
            raise ConsistencyError(f"{key} has dimension {dims[key]}, predicted {predicted[key]}")

    supports = []
    for orbit in s.torsion:
        supports.extend(b for b, _ in irreducible_factors(orbit.support_form))

    F = list(E_minus)
    for _ in range(4 * k + 1):
        before = len(F)
        for b in supports:
            X = real_sum(U, F, n)
            Y = _torsion_directions(Pair.from_real_rows(k, X), b)
            if Y:
                F = real_sum(F, _quaternionic_span(Y, k), n)
        if len(F) == before:
            break
    else:
        raise ConsistencyError("torsion saturation did not converge")
    E_mid = F
    U_mid = real_intersection(U, E_mid, n) if E_mid else []
    dims["E_mid"], dims["U_mid"] = len(E_mid), len(U_mid)
    for key in ("E_mid", "U_mid"):
        if dims[key] != predicted[key]:
            raise ConsistencyError(f"{key} has dimension {dims[key]}, predicted {predicted[key]}")
    filtration = Filtration(
        dims,
        tuple(map(tuple, E_minus)),
        tuple(map(tuple, U_minus)),
        tuple(map(tuple, E_mid)),
        tuple(map(tuple, U_mid)),
    )
    filtration_violations(p, filtration, raise_on_error=True)
    return filtration


def filtration_violations(p: Pair, fl: Filtration, raise_on_error: bool = False) -> list[str]:
    """Containment and quaternionic-closure checks for a filtration."""
    n = 4 * p.k
    problems = []
    U = p.real_rows()

    def inside(small, big):
        return real_rank(list(big) + list(small), n) == real_rank(list(big), n) if small else True

    parts = [("E_minus", fl.E_minus), ("U_minus", fl.U_minus), ("E_mid", fl.E_mid), ("U_mid", fl.U_mid)]
    for name, rows in parts:
        if name.startswith("E") and rows:
            for u in (QI, QJ, QK):
                if not inside(_left_mult_rows(rows, u, p.k), rows):
                    problems.append(f"{name} is not quaternionic")
                    break
        if name.startswith("U") and not inside(rows, U):
            problems.append(f"{name} is not contained in U")
    if not inside(fl.U_minus, fl.E_minus):
        problems.append("U_minus is not contained in E_minus")
    if not inside(fl.U_mid, fl.E_mid):
        problems.append("U_mid is not contained in E_mid")
    if not inside(fl.E_minus, fl.E_mid):
        problems.append("E_minus is not contained in E_mid")
    if not inside(fl.U_minus, fl.U_mid):
        problems.append("U_minus is not contained in U_mid")
    for key, rows in (("E_minus", fl.E_minus), ("U_minus", fl.U_minus), ("E_mid", fl.E_mid), ("U_mid", fl.U_mid)):
        if fl.dims.get(key) != len(rows):
            problems.append(f"{key} dimension record disagrees with its basis")
    if problems and raise_on_error:
        raise ConsistencyError("; ".join(problems))
    return problems


def check_signature(p: Pair, s: SheafSignature) -> list[str]:
    return signature_violations(s, p.k, p.dim)
