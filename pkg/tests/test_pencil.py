import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpair.errors import ConsistencyError
from qpair.exact import I, ONE, ZERO, Gauss, MatrixG, QJ, Quaternion, left_mult_matrix
from qpair.pairs import Pair, SpherePoint, gen_U, gen_V, gen_W, intersection_dim, product, random_automorphism, act
from qpair.pencil import (
    CP1Point,
    build_pencil,
    eigensection_check,
    eigensections,
    evaluate,
    fiber_kernel_dim,
    reality_check,
    twist_matrix,
)

FIXTURES = Path(__file__).parent / "fixtures"
REAL_LINE = Pair(1, ((Quaternion(1),),))


def columns_at(k, x):
    V, W = eigensections(k)
    return V.scale(x.z0) + W.scale(x.z1)


def span_rank(*column_lists):
    rows = [list(c) for cols in column_lists for c in cols]
    return MatrixG(rows, len(rows[0])).rank()


def test_eigensections_at_zero_span_expected_plane():
    S = columns_at(1, CP1Point.from_zeta(0))
    expected = [(ONE, I, ZERO, ZERO), (ZERO, ZERO, ONE, I)]
    cols = [S.column(c) for c in range(2)]
    assert span_rank(cols, expected) == 2


def test_eigensections_at_one_lie_in_eigenspace_of_j():
    S = columns_at(1, CP1Point.from_zeta(1))
    expected = [(ONE, ZERO, I, ZERO), (ZERO, I, ZERO, ONE)]
    cols = [S.column(c) for c in range(2)]
    assert span_rank(cols, expected) == 2


@pytest.mark.parametrize("zeta", [0, 1, None, Gauss(1, 1) / 2, Gauss(0, 1), Gauss(-2, 3)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_eigensection_check_passes(k, zeta):
    eigensection_check(k, zeta)


def test_eigensection_check_rejects_flipped_sections():
    doc = json.loads((FIXTURES / "flipped_eigensections.json").read_text())
    from qpair.exact import parse_gauss

    sections = tuple(tuple(tuple(parse_gauss(x) for x in v) for v in pair) for pair in doc["sections"])
    with pytest.raises(ConsistencyError):
        eigensection_check(1, 1, sections)


def test_eigensections_are_minus_I_eigenvectors_numerically_anywhere():
    x = CP1Point.from_zeta(Gauss(3, -5) / 7)
    L = left_mult_matrix(x.sphere_point().u)
    S = columns_at(1, x)
    assert (L @ S + S.scale(I)).is_zero()


def test_pencil_shapes():
    P = build_pencil(Pair.zero(1))
    V, W = eigensections(1)
    assert P.m == 4 and P.A == V and P.B == W
    assert build_pencil(Pair.full(1)).m == 0
    P = build_pencil(REAL_LINE)
    assert P.m == 3
    assert evaluate(P, CP1Point.from_zeta(0)).rank() == 2


def test_pencil_golden_dump():
    assert build_pencil(REAL_LINE).to_json() + "\n" == (FIXTURES / "pencil_real_line.json").read_text()


def test_evaluate_at_poles():
    P = build_pencil(gen_U(1))
    assert evaluate(P, CP1Point(1, 0)) == P.A
    assert evaluate(P, CP1Point(0, 1)) == P.B
    assert evaluate(P, CP1Point(2, 6)).rank() == evaluate(P, CP1Point(1, 3)).rank()


def test_twist_matrix_is_quaternionic():
    for k in (1, 2, 3):
        C = twist_matrix(k)
        assert C @ C.conj() == MatrixG.identity(2 * k).scale(-1)


@pytest.mark.parametrize(
    "p",
    [Pair.zero(1), REAL_LINE, Pair.full(2), gen_U(2), gen_V(1), gen_W(2, SpherePoint(QJ))],
    ids=["zero", "line", "full", "U2", "V1", "W2"],
)
@pytest.mark.parametrize("method", ["echelon", "orthogonal"])
def test_reality_check_passes(p, method):
    reality_check(build_pencil(p, method))


def test_reality_check_detects_broken_pencil():
    P = build_pencil(REAL_LINE)
    broken = type(P)(P.k, P.A.scale(I), P.B)
    with pytest.raises(ConsistencyError):
        reality_check(broken)


def test_fiber_kernel_dim_examples():
    w = build_pencil(gen_W(1, SpherePoint(QJ)))
    assert fiber_kernel_dim(w, CP1Point.from_zeta(1)) == 1
    assert fiber_kernel_dim(w, CP1Point.from_zeta(0)) == 0
    full = build_pencil(Pair.full(1))
    assert fiber_kernel_dim(full, CP1Point.from_zeta(Gauss(2, 1))) == 2


points = st.builds(
    Gauss,
    st.fractions(min_value=-6, max_value=6, max_denominator=5),
    st.fractions(min_value=-6, max_value=6, max_denominator=5),
)


@given(st.integers(0, 40), points)
def test_pencil_rank_is_half_the_intersection_dimension(seed, zeta):
    base = product(gen_W(1, SpherePoint(QJ)), gen_U(1))
    p = act(random_automorphism(base.k, seed), base)
    x = CP1Point.from_zeta(zeta)
    P = build_pencil(p)
    assert 2 * fiber_kernel_dim(P, x) == intersection_dim(p, x.sphere_point())
    # rank drops come in antipodal pairs
    assert P.at(x).rank() == P.at(x.antipode()).rank()


def test_cp1_point_equality_is_projective():
    assert CP1Point(2, 4) == CP1Point(1, 2)
    assert hash(CP1Point(2, 4)) == hash(CP1Point(1, 2))
    assert CP1Point.from_zeta(None).zeta() is None
    with pytest.raises(Exception):
        CP1Point(0, 0)
