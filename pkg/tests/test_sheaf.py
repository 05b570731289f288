import random

import pytest
from gmpy2 import mpq

from qpair.acceptance import build_product, random_factor_list, random_subspace
from qpair.errors import ConsistencyError
from qpair.exact import I, BinaryForm, Gauss, QI, QJ, QK, Quaternion, Z0, Z1
from qpair.exact.polys import linear_form_at
from qpair.pairs import Pair, Rotation, SpherePoint, act, dual, gen_U, gen_V, gen_W, product, random_automorphism, sphere_point_from_zeta
from qpair.pencil import CP1Point, build_pencil
from qpair.sheaf import (
    SheafSignature,
    TorsionOrbit,
    cokernel_free_splitting,
    determinantal_divisor,
    generic_rank,
    graded_nullity,
    kernel_splitting,
    numeric_roots,
    rational_support,
    rotate_generic,
    sheaf_signature,
    sigma_twist,
    signature_violations,
    support_form_of,
    torsion_invariants,
)

REAL_LINE = Pair(1, ((Quaternion(1),),))
IMAGINARY = dual(REAL_LINE)


def sig(p):
    return sheaf_signature(build_pencil(p))


# --- graded nullity and splitting ------------------------------------------------------


def test_nullity_of_real_line_vanishes():
    P = build_pencil(REAL_LINE)
    assert [graded_nullity(P, d) for d in range(5)] == [0] * 5


def test_nullity_of_full_space():
    P = build_pencil(Pair.full(1))
    assert [graded_nullity(P, d) for d in range(1, 5)] == [2, 4, 6, 8]


def test_nullity_of_imaginary_part():
    P = build_pencil(IMAGINARY)
    assert [graded_nullity(P, d) for d in (1, 2, 3)] == [0, 1, 2]


def test_nullity_rejects_negative_twist():
    with pytest.raises(ValueError):
        graded_nullity(build_pencil(REAL_LINE), -1)


def test_kernel_splitting_examples():
    assert kernel_splitting(build_pencil(Pair.full(1))) == [-1, -1]
    assert kernel_splitting(build_pencil(IMAGINARY)) == [-2]
    for k in range(4):
        assert kernel_splitting(build_pencil(gen_U(k))) == []


def test_cokernel_splitting_examples():
    assert cokernel_free_splitting(build_pencil(REAL_LINE)) == [2]
    assert cokernel_free_splitting(build_pencil(Pair.zero(1))) == [1, 1]
    for k in (1, 2, 3):
        assert cokernel_free_splitting(build_pencil(gen_W(k, SpherePoint(QJ)))) == []


def test_generic_rank_examples():
    assert generic_rank(build_pencil(REAL_LINE)) == 2
    assert generic_rank(build_pencil(gen_W(1, SpherePoint(QJ)))) == 2
    assert generic_rank(build_pencil(Pair.full(1))) == 0


def test_rank_of_W_drops_exactly_at_its_support():
    P = build_pencil(gen_W(1, SpherePoint(QJ)))
    for zeta in (0, 2, 3, Gauss(0, 1), None, Gauss(1, 1)):
        assert P.at(CP1Point.from_zeta(zeta)).rank() == 2
    for zeta in (1, -1):
        assert P.at(CP1Point.from_zeta(zeta)).rank() == 1


def test_rotate_generic_keeps_generic_pencils():
    P = build_pencil(gen_U(2))
    Q, rotation = rotate_generic(P)
    assert rotation.is_identity() and Q is P


def test_rotate_generic_moves_torsion_off_infinity():
    # W(1, -i) is supported at zeta = 0 and infinity
    P = build_pencil(gen_W(1, SpherePoint(-QI)))
    Q, rotation = rotate_generic(P)
    assert not rotation.is_identity()
    assert generic_rank(Q) == generic_rank(P)
    assert Q.at(CP1Point.from_zeta(None)).rank() == generic_rank(P)


# --- antipodal conjugation of forms ----------------------------------------------------


def test_sigma_twist_examples():
    assert sigma_twist(Z0) == BinaryForm([0, -1])
    assert sigma_twist(sigma_twist(Z0)) == BinaryForm([-1, 0])
    q = Z0 * Z0 + Z1 * Z1
    assert sigma_twist(q) == q


@pytest.mark.parametrize("zeta", [0, 1, Gauss(2, -1), Gauss(1, 1) / 2])
def test_sigma_twist_vanishes_at_antipode(zeta):
    f = linear_form_at(zeta)
    twisted = sigma_twist(f)
    a = CP1Point.from_zeta(zeta).antipode()
    assert not twisted.evaluate(a.z0, a.z1)


def test_support_form_of_j():
    f = support_form_of(SpherePoint(QJ))
    assert f == BinaryForm([1, 0, -1])
    assert [p.u for p in rational_support(f)] == sorted([QJ, -QJ], key=lambda u: u == QJ)


def test_rational_support_of_irrational_form():
    assert rational_support(BinaryForm([1, 0, -2])) is None


def test_numeric_roots_of_i_and_infinity():
    roots = numeric_roots(support_form_of(SpherePoint(QI)))
    assert roots == ((-1.0, 0.0, 0.0), (1.0, 0.0, 0.0))


def test_orbit_rotation_moves_support():
    g = Quaternion(mpq(1, 2), mpq(1, 2), mpq(1, 2), mpq(1, 2))
    orbit = TorsionOrbit(support_form_of(SpherePoint(QI)), (1,))
    # g i g^-1 = j for this g
    assert orbit.rotated(Rotation(g)).support_form == support_form_of(SpherePoint(QJ))


# --- torsion ---------------------------------------------------------------------------


def test_W_1_j_torsion():
    (orbit,) = sig(gen_W(1, SpherePoint(QJ))).torsion
    assert orbit.support_form == support_form_of(SpherePoint(QJ))
    assert orbit.partition == (1,) and orbit.length == 2


def test_W_2_j_torsion():
    (orbit,) = sig(gen_W(2, SpherePoint(QJ))).torsion
    assert orbit.partition == (2,) and orbit.length == 4


def test_product_of_two_W_has_two_orbits():
    s = sig(product(gen_W(1, SpherePoint(QJ)), gen_W(1, SpherePoint(QI))))
    assert [o.partition for o in s.torsion] == [(1,), (1,)]
    assert {o.support_form for o in s.torsion} == {support_form_of(SpherePoint(QJ)), support_form_of(SpherePoint(QI))}


def test_repeated_support_gives_partition_with_two_parts():
    s = sig(product(gen_W(2, SpherePoint(QK)), gen_W(1, SpherePoint(QK))))
    (orbit,) = s.torsion
    assert orbit.partition == (2, 1) and orbit.length == 6


def test_irrational_support_is_a_single_orbit():
    rng = random.Random(3)
    p = random_subspace(rng, 1, 2)
    (orbit,) = sig(p).torsion
    assert orbit.degree == 2 and orbit.partition == (1,)
    assert rational_support(orbit.support_form) is None
    assert len(orbit.numeric_support) == 2
    a, b = orbit.numeric_support
    assert all(abs(x + y) < 1e-9 for x, y in zip(a, b))


def test_determinantal_divisor_of_W():
    P = build_pencil(gen_W(3, SpherePoint(QJ)))
    f = determinantal_divisor(P)
    assert f == support_form_of(SpherePoint(QJ)) ** 3


def test_determinantal_divisor_rejects_wrong_expectation():
    P = build_pencil(gen_W(1, SpherePoint(QJ)))
    with pytest.raises(ConsistencyError):
        determinantal_divisor(P, None, 4)


def test_unknown_torsion_method():
    with pytest.raises(ValueError):
        torsion_invariants(build_pencil(REAL_LINE), method="guess")


CROSS_CHECK = [
    product(gen_W(2, SpherePoint(QJ)), gen_W(1, SpherePoint(QJ))),
    product(gen_W(1, sphere_point_from_zeta(Gauss(1, 1) / 2)), gen_U(1)),
    product(gen_W(1, SpherePoint(-QI)), gen_V(1)),
    act(random_automorphism(3, 4), product(gen_W(2, SpherePoint(QK)), dual(gen_U(0)))),
    random_subspace(random.Random(8), 2, 4),
]


@pytest.mark.parametrize("p", CROSS_CHECK, ids=range(len(CROSS_CHECK)))
def test_local_torsion_agrees_with_smith_form(p):
    P = build_pencil(p)
    assert torsion_invariants(P, method="local") == torsion_invariants(P, method="smith")


def test_quotient_choice_does_not_matter():
    rng = random.Random(12)
    for _ in range(6):
        base = build_product(random_factor_list(rng, 4))
        p = act(random_automorphism(base.k, rng.randint(0, 99)), base)
        assert sheaf_signature(build_pencil(p, "echelon")) == sheaf_signature(build_pencil(p, "orthogonal"))


# --- signatures ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p,kernel,cokernel",
    [
        (gen_U(2), (), (6,)),
        (gen_V(1), (), (3, 3)),
        (REAL_LINE, (), (2,)),
        (Pair.zero(1), (), (1, 1)),
        (Pair.full(1), (-1, -1), ()),
        (IMAGINARY, (-2,), ()),
    ],
    ids=["U2", "V1", "line", "zero", "full", "imaginary"],
)
def test_signature_examples(p, kernel, cokernel):
    s = sig(p)
    assert (s.kernel_degrees, s.cokernel_degrees, s.torsion) == (kernel, cokernel, ())


def test_signature_of_span_of_1_and_j():
    s = sig(Pair(1, ((Quaternion(1),), (QJ,))))
    assert s.kernel_degrees == () and s.cokernel_degrees == ()
    (orbit,) = s.torsion
    assert orbit.support_form == support_form_of(SpherePoint(QJ)) and orbit.partition == (1,)


def test_signature_violations_detect_each_identity():
    good = SheafSignature((), (2,), ())
    assert signature_violations(good, 1, 1) == []
    assert "rank identity fails" in signature_violations(good, 1, 2)
    assert "degree identity fails" in signature_violations(SheafSignature((), (3,), ()), 1, 1)
    assert "trivial summand present" in signature_violations(SheafSignature((), (0, 2), ()), 1, 0)
    assert any("odd multiplicity" in v for v in signature_violations(SheafSignature((), (1,), ()), 1, 1))
    twisted = TorsionOrbit(linear_form_at(1) * linear_form_at(2), (1,))
    assert "torsion support is not antipodally closed" in signature_violations(SheafSignature((), (), (twisted,)), 1, 2)
    odd = TorsionOrbit(linear_form_at(I), (1,))
    assert "torsion support of odd degree" in signature_violations(SheafSignature((), (), (odd,)), 1, 2)


def test_signature_rotation_round_trip():
    g = Quaternion(mpq(3, 5), 0, mpq(4, 5), 0)
    s = sig(gen_W(2, SpherePoint(QK)))
    assert s.rotated(Rotation(g)).rotated(Rotation(g).inverse()) == s
