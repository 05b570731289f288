"""Exact classification of real subspaces of quaternionic vector spaces."""

from .classifier import (
    Classification,
    Factor,
    FactorSignature,
    Filtration,
    canonical_filtration,
    classify,
    dual_signature,
    is_augmented,
    is_strengthened,
)
from .errors import ConsistencyError, InputError, QPairError
from .pairs import (
    Automorphism,
    ComplexPair,
    Pair,
    Rotation,
    SpherePoint,
    act,
    complex_decompose,
    complex_view,
    dual,
    gen_U,
    gen_V,
    gen_W,
    intersection_dim,
    product,
    random_automorphism,
    sphere_point_from_zeta,
    validate,
)
from .pencil import build_pencil
from .sheaf import SheafSignature, TorsionOrbit, sheaf_signature

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "Classification",
    "ComplexPair",
    "ConsistencyError",
    "Factor",
    "FactorSignature",
    "Filtration",
    "InputError",
    "Pair",
    "QPairError",
    "Rotation",
    "SheafSignature",
    "SpherePoint",
    "TorsionOrbit",
    "act",
    "build_pencil",
    "canonical_filtration",
    "classify",
    "complex_decompose",
    "complex_view",
    "dual",
    "dual_signature",
    "gen_U",
    "gen_V",
    "gen_W",
    "intersection_dim",
    "is_augmented",
    "is_strengthened",
    "product",
    "random_automorphism",
    "sheaf_signature",
    "sphere_point_from_zeta",
    "validate",
]
