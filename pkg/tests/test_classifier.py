import random

import pytest

from helpers import same_subspace
from qpair.acceptance import build_product, expected_signature, filtration_corpus, random_factor_list, random_subspace
from qpair.classifier import (
    Factor,
    FactorSignature,
    canonical_filtration,
    classify,
    dual_signature,
    factor_dimensions,
    factor_signature,
    filtration_violations,
    is_augmented,
    is_strengthened,
    model_from_signature,
    predicted_dims,
)
from qpair.errors import ConsistencyError, InputError
from qpair.exact import BinaryForm, Gauss, QI, QJ, QK, Quaternion
from qpair.exact.linalg import real_rank
from qpair.pairs import Pair, SpherePoint, act, dual, gen_U, gen_V, gen_W, product, random_automorphism, sphere_point_from_zeta
from qpair.sheaf import SheafSignature, TorsionOrbit, support_form_of

SJ = support_form_of(SpherePoint(QJ))


def F(kind, k, q=None):
    return Factor(kind, k, support_form_of(q) if q is not None else None)


def S(*factors):
    return FactorSignature(tuple(factors))


# --- reading factors off the sheaf ---------------------------------------------------


def test_factor_signature_examples():
    assert factor_signature(SheafSignature((), (4,), ())) == S(F("U", 1))
    assert factor_signature(SheafSignature((-1, -1), (), ())) == S(F("Vstar", 0))
    s = SheafSignature((), (1, 1, 2), (TorsionOrbit(SJ, (1,)),))
    assert factor_signature(s) == S(F("V", 0), F("U", 0), F("W", 1, SpherePoint(QJ)))


def test_factor_signature_rejects_unpaired_odd_degree():
    with pytest.raises(ConsistencyError):
        factor_signature(SheafSignature((), (3,), ()))


def test_factor_validation():
    with pytest.raises(InputError):
        Factor("X", 1)
    with pytest.raises(InputError):
        Factor("W", 1)
    with pytest.raises(InputError):
        Factor("U", 1, SJ)
    with pytest.raises(InputError):
        Factor("W", 0, SJ)


def test_factor_dimensions():
    assert factor_dimensions(S(F("U", 2), F("Vstar", 1), F("W", 3, SpherePoint(QI)))) == (3 + 3 + 3, 5 + 8 + 6)


def test_signature_is_a_sorted_multiset():
    a = S(F("W", 1, SpherePoint(QJ)), F("U", 0), F("U", 0))
    b = S(F("U", 0), F("W", 1, SpherePoint(QJ)), F("U", 0))
    assert a == b
    assert a.counts() == [(F("U", 0), 2), (F("W", 1, SpherePoint(QJ)), 1)]
    assert str(a) == f"U(0)^2 x W(1, {SJ})"


# --- classify ----------------------------------------------------------------------------


def test_classify_examples():
    assert classify(gen_U(3)).factors == S(F("U", 3))
    assert classify(dual(gen_V(1))).factors == S(F("Vstar", 1))
    assert classify(Pair.full(1)).factors == S(F("Vstar", 0))
    assert classify(Pair.zero(1)).factors == S(F("V", 0))
    assert classify(Pair.zero(0)).factors == S()


def test_classify_triple_product():
    p = product(product(gen_V(0), gen_U(0)), gen_W(1, SpherePoint(QJ)))
    c = classify(p)
    assert c.factors == S(F("V", 0), F("U", 0), F("W", 1, SpherePoint(QJ)))
    assert c.sheaf.cokernel_degrees == (1, 1, 2)


@pytest.mark.parametrize("seed", range(10))
def test_every_three_dimensional_subspace_is_dual_of_real_line(seed):
    p = random_subspace(random.Random(seed), 1, 3)
    assert classify(p).factors == S(F("Ustar", 0))


@pytest.mark.parametrize("seed", range(5))
def test_generic_subspace_of_H2(seed):
    # dimension 4 in H^2: rank identity gives no free part, so all torsion
    c = classify(random_subspace(random.Random(100 + seed), 2, 4))
    assert c.sheaf.kernel_degrees == () and c.sheaf.cokernel_degrees == ()
    assert c.sheaf.torsion_length == 4


def test_classify_is_deterministic():
    p = act(random_automorphism(4, 1), product(gen_W(2, SpherePoint(QK)), gen_U(1)))
    assert classify(p) == classify(p)


def test_classify_under_automorphism_moves_support():
    phi = random_automorphism(2, 0)
    c = classify(act(phi, gen_W(2, SpherePoint(QI))))
    moved = SpherePoint(phi.a * QI * phi.a.inverse())
    assert c.factors == S(F("W", 2, moved))


# --- duality and the final remark --------------------------------------------------------


def test_dual_signature_examples():
    assert dual_signature(S(F("U", 2))) == S(F("Ustar", 2))
    assert dual_signature(S(F("Vstar", 0))) == S(F("V", 0))
    assert dual_signature(S(F("W", 1, SpherePoint(QJ)))) == S(F("W", 1, SpherePoint(QJ)))


@pytest.mark.parametrize("q", [QI, QJ, QK])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_dual_of_W_has_the_same_support(k, q):
    assert classify(dual(gen_W(k, SpherePoint(q)))).factors == S(F("W", k, SpherePoint(q)))


@pytest.mark.parametrize("seed", range(8))
def test_dual_classification_is_dual_signature(seed):
    p = build_product(random_factor_list(random.Random(seed), 4))
    assert classify(dual(p)).factors == dual_signature(classify(p).factors)


def test_augmented_and_strengthened():
    f = S(F("U", 1), F("W", 2, SpherePoint(QJ)))
    assert is_augmented(f) and is_strengthened(f)
    assert not is_augmented(S(F("Vstar", 0)))
    assert not is_strengthened(S(F("V", 0)))


# --- models ------------------------------------------------------------------------------


def test_model_examples():
    assert same_subspace(model_from_signature(S(F("U", 0), F("U", 0))), Pair(2, ((Quaternion(1), Quaternion()), (Quaternion(), Quaternion(1)))))
    p = model_from_signature(S(F("W", 1, SpherePoint(QJ)), F("V", 1)))
    assert same_subspace(p, product(gen_V(1), gen_W(1, SpherePoint(QJ))))


def test_model_rejects_irrational_support():
    with pytest.raises(InputError):
        model_from_signature(S(Factor("W", 1, BinaryForm([1, 0, -2]))))


def test_model_round_trip_on_random_signatures():
    rng = random.Random(77)
    for _ in range(50):
        factors = random_factor_list(rng, 5)
        f = expected_signature(factors)
        assert classify(model_from_signature(f)).factors == f


# --- the canonical filtration ------------------------------------------------------------


def test_filtration_of_U_is_trivial():
    for k in range(3):
        fl = canonical_filtration(gen_U(k))
        assert fl.dims == {"E_minus": 0, "U_minus": 0, "E_mid": 0, "U_mid": 0}


def test_filtration_of_full_space():
    fl = canonical_filtration(Pair.full(1))
    assert fl.dims == {"E_minus": 4, "U_minus": 4, "E_mid": 4, "U_mid": 4}


def test_filtration_of_block_product():
    p = product(product(dual(gen_U(1)), gen_W(1, SpherePoint(QJ))), gen_V(1))
    fl = canonical_filtration(p)
    assert fl.dims == {"E_minus": 8, "U_minus": 5, "E_mid": 12, "U_mid": 7}
    # E- is the first block H^2, E_mid is the first two blocks
    first = [[int(i == j) for j in range(24)] for i in range(8)]
    assert real_rank(list(fl.E_minus) + first, 24) == 8
    first_two = [[int(i == j) for j in range(24)] for i in range(12)]
    assert real_rank(list(fl.E_mid) + first_two, 24) == 12


def test_filtration_with_irrational_support():
    p = product(random_subspace(random.Random(5), 1, 2), dual(gen_U(0)))
    c = classify(p)
    fl = canonical_filtration(p, c.sheaf)
    assert fl.dims == predicted_dims(c.factors)
    assert filtration_violations(p, fl) == []


@pytest.mark.parametrize("factors", filtration_corpus(), ids=str)
def test_filtration_matches_prediction_on_corpus(factors):
    p = build_product(factors)
    c = classify(p)
    fl = canonical_filtration(p, c.sheaf)
    assert fl.dims == predicted_dims(c.factors)
    assert filtration_violations(p, fl) == []


@pytest.mark.parametrize("seed", range(4))
def test_filtration_is_equivariant(seed):
    base = product(product(dual(gen_U(1)), gen_W(1, sphere_point_from_zeta(Gauss(1, 1) / 2))), gen_U(0))
    phi = random_automorphism(base.k, seed)
    assert canonical_filtration(act(phi, base)).dims == canonical_filtration(base).dims


def test_filtration_violations_catch_bad_filtration():
    p = gen_W(1, SpherePoint(QJ))
    fl = canonical_filtration(p)
    bad = type(fl)(dict(fl.dims, U_mid=1), fl.E_minus, fl.U_minus, fl.E_mid, ((0, 1, 0, 0),))
    problems = filtration_violations(p, bad)
    assert problems
    with pytest.raises(ConsistencyError):
        filtration_violations(p, bad, raise_on_error=True)
