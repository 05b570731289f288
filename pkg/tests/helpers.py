"""Shared test helpers."""

from qpair.exact.linalg import real_rank
from qpair.pairs import Pair, vector_to_real


def same_subspace(p: Pair, q: Pair) -> bool:
    if p.k != q.k or p.dim != q.dim:
        return False
    n = 4 * p.k
    return real_rank(p.real_rows() + q.real_rows(), n) == p.dim


def contains(p: Pair, vec) -> bool:
    n = 4 * p.k
    return real_rank(p.real_rows() + [vector_to_real(vec)], n) == p.dim
