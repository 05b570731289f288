"""Exact arithmetic: Q, Q(i), rational quaternions, matrices, forms, Smith form."""

from .linalg import MatrixG, kernel_basis, left_mult_matrix, rank
from .numbers import (
    I,
    ONE,
    ZERO,
    Gauss,
    Q1,
    QI,
    QJ,
    QK,
    Quaternion,
    Rational,
    format_gauss,
    format_rational,
    parse_gauss,
    rational,
)
from .polys import BinaryForm, Z0, Z1, coprime_basis, gcd_forms, irreducible_factors, multiplicity
from .smith import PolyMatrix, smith_form

__all__ = [
    "BinaryForm",
    "Gauss",
    "I",
    "MatrixG",
    "ONE",
    "PolyMatrix",
    "Q1",
    "QI",
    "QJ",
    "QK",
    "Quaternion",
    "Rational",
    "Z0",
    "Z1",
    "ZERO",
    "coprime_basis",
    "format_gauss",
    "format_rational",
    "gcd_forms",
    "irreducible_factors",
    "kernel_basis",
    "left_mult_matrix",
    "multiplicity",
    "parse_gauss",
    "rank",
    "rational",
    "smith_form",
]
