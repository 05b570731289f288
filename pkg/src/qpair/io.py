"""JSON serialization of pairs, signatures and classification reports.

Rationals are strings ``"p/q"`` or ``"p"``; quaternions are objects with
keys ``r, i, j, k``; Gaussian rationals are ``{"re": ..., "im": ...}``,
except inside binary forms, whose coefficients are compact strings such as
``"1/2-3I"``.  Every document written carries ``"format_version": 1``.
"""

from __future__ import annotations

import json
import os

from .classifier import (
    Classification,
    Factor,
    FactorSignature,
    Filtration,
    is_augmented,
    is_strengthened,
)
from .errors import InputError
from .exact import BinaryForm, Gauss, Quaternion, format_gauss, format_rational, parse_gauss, rational
from .pairs import ComplexPair, Pair, Rotation
from .sheaf import SheafSignature, TorsionOrbit, numeric_roots, rational_support

FORMAT_VERSION = 1
ORIENTATION_ANCHOR = "O(2) for (R,H)"
TYPE_NAMES = {"U": "U", "Ustar": "U*", "V": "V", "Vstar": "V*", "W": "W"}
TYPE_KINDS = {v: k for k, v in TYPE_NAMES.items()}

__all__ = [
    "FORMAT_VERSION",
    "dumps",
    "max_k",
    "pair_to_json",
    "pair_from_json",
    "complex_pair_to_json",
    "complex_pair_from_json",
    "signature_to_json",
    "signature_from_json",
    "factors_to_json",
    "factors_from_json",
    "report",
    "parse_zeta",
    "parse_rotation",
]


def dumps(doc, pretty: bool = False) -> str:
    """Canonical serialization: fixed key order, no trailing whitespace."""
    if pretty:
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False) + "\n"


def max_k() -> int:
    raw = os.environ.get("QPAIR_MAX_K", "16")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"QPAIR_MAX_K must be an integer, got {raw!r}") from None


# --- scalars -----------------------------------------------------------------------


def _rational_at(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{where}: expected a rational string, got {value!r}")
    try:
        return rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: malformed rational {value!r} ({exc})") from None


def quaternion_to_json(q: Quaternion) -> dict:
    return {name: format_rational(x) for name, x in zip("rijk", q.coords())}


def quaternion_from_json(obj, where: str) -> Quaternion:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a quaternion object")
    extra = set(obj) - set("rijk")
    if extra:
        raise InputError(f"{where}: unknown quaternion keys {sorted(extra)}")
    return Quaternion(*(_rational_at(obj.get(name, "0"), f"{where}.{name}") for name in "rijk"))


def gauss_to_json(z: Gauss) -> dict:
    return {"re": format_rational(z.re), "im": format_rational(z.im)}


def gauss_from_json(obj, where: str) -> Gauss:
    if isinstance(obj, str):
        try:
            return parse_gauss(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{where}: malformed Gaussian rational {obj!r} ({exc})") from None
    if not isinstance(obj, dict) or set(obj) - {"re", "im"}:
        raise InputError(f"{where}: expected {{'re': ..., 'im': ...}}")
    return Gauss(_rational_at(obj.get("re", "0"), f"{where}.re"), _rational_at(obj.get("im", "0"), f"{where}.im"))


def parse_zeta(text: str):
    """A point of the sphere by its coordinate: ``"inf"`` or a Gaussian rational like ``"1/2+I"``."""
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return None
    try:
        return parse_gauss(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed support coordinate {text!r} ({exc})") from None


def parse_rotation(text: str) -> Rotation:
    """Four comma-separated rationals ``r,i,j,k`` of exact unit norm."""
    parts = text.split(",")
    if len(parts) != 4:
        raise InputError(f"rotation needs four comma-separated rationals, got {text!r}")
    g = Quaternion(*(_rational_at(p.strip(), f"rotation[{n}]") for n, p in enumerate(parts)))
    if g.norm() != 1:
        raise InputError(f"rotation {text!r} does not have unit norm")
    return Rotation(g)


def _check_version(doc, where: str) -> None:
    if "format_version" in doc and doc["format_version"] != FORMAT_VERSION:
        raise InputError(f"{where}: unsupported format_version {doc['format_version']!r}")


# --- pairs -------------------------------------------------------------------------


def pair_to_json(p: Pair) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "quaternionic_dimension": p.k,
        "subspace_basis": [[quaternion_to_json(q) for q in v] for v in p.basis],
    }


def pair_from_json(doc) -> Pair:
    if not isinstance(doc, dict):
        raise InputError("pair file must contain a JSON object")
    _check_version(doc, "pair")
    k = doc.get("quaternionic_dimension")
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise InputError(f"quaternionic_dimension must be a natural number, got {k!r}")
    if k > max_k():
        raise InputError(f"quaternionic_dimension {k} exceeds QPAIR_MAX_K = {max_k()}")
    basis = doc.get("subspace_basis", [])
    if not isinstance(basis, list):
        raise InputError("subspace_basis must be a list")
    vectors = []
    for n, v in enumerate(basis):
        if not isinstance(v, list) or len(v) != k:
            raise InputError(f"subspace_basis[{n}]: expected a list of {k} quaternions")
        vectors.append(tuple(quaternion_from_json(q, f"subspace_basis[{n}][{s}]") for s, q in enumerate(v)))
    return Pair(k, tuple(vectors))


def complex_pair_to_json(cp: ComplexPair) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "complex_dimension": cp.n,
        "subspace_basis": [[gauss_to_json(z) for z in v] for v in cp.basis],
    }


def complex_pair_from_json(doc) -> ComplexPair:
    if not isinstance(doc, dict):
        raise InputError("complex pair file must contain a JSON object")
    _check_version(doc, "complex pair")
    n = doc.get("complex_dimension")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InputError(f"complex_dimension must be a natural number, got {n!r}")
    vectors = []
    for m, v in enumerate(doc.get("subspace_basis", [])):
        if not isinstance(v, list) or len(v) != n:
            raise InputError(f"subspace_basis[{m}]: expected a list of {n} complex numbers")
        vectors.append(tuple(gauss_from_json(z, f"subspace_basis[{m}][{s}]") for s, z in enumerate(v)))
    return ComplexPair(n, tuple(vectors))


# --- signatures --------------------------------------------------------------------


def form_to_json(f: BinaryForm) -> list:
    return [format_gauss(c) for c in f.coeffs]


def form_from_json(coeffs, where: str) -> BinaryForm:
    if not isinstance(coeffs, list) or not coeffs:
        raise InputError(f"{where}: expected a nonempty list of coefficients")
    return BinaryForm([gauss_from_json(c, f"{where}[{t}]") for t, c in enumerate(coeffs)])


def signature_to_json(s: SheafSignature, numeric: bool = True) -> dict:
    torsion = []
    for o in s.torsion:
        entry = {"support_form": form_to_json(o.support_form), "partition": list(o.partition)}
        if numeric and o.numeric_support:
            entry["numeric_support"] = [[round(x, 12) + 0.0 for x in v] for v in o.numeric_support]
        torsion.append(entry)
    return {
        "kernel_degrees": list(s.kernel_degrees),
        "cokernel_degrees": list(s.cokernel_degrees),
        "torsion": torsion,
    }


def _int_list(value, where: str) -> tuple:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise InputError(f"{where}: expected a list of integers")
    return tuple(value)


def signature_from_json(doc) -> SheafSignature:
    if not isinstance(doc, dict):
        raise InputError("sheaf signature must be an object")
    torsion = []
    for n, o in enumerate(doc.get("torsion", [])):
        form = form_from_json(o.get("support_form"), f"torsion[{n}].support_form")
        torsion.append(TorsionOrbit(form, _int_list(o.get("partition"), f"torsion[{n}].partition")))
    return SheafSignature(
        _int_list(doc.get("kernel_degrees", []), "kernel_degrees"),
        _int_list(doc.get("cokernel_degrees", []), "cokernel_degrees"),
        tuple(torsion),
    )


def _support_to_json(form: BinaryForm) -> dict:
    out = {"form": form_to_json(form)}
    points = rational_support(form)
    if points is not None:
        out["points"] = [quaternion_to_json(p.u) for p in points]
    else:
        out["numeric_points"] = [[round(x, 12) + 0.0 for x in v] for v in numeric_roots(form)]
    return out


def factors_to_json(f: FactorSignature) -> list:
    out = []
    for factor, mult in f.counts():
        entry = {"type": TYPE_NAMES[factor.kind], "k": factor.k, "mult": mult}
        if factor.support is not None:
            entry["support"] = _support_to_json(factor.support)
        out.append(entry)
    return out


def factors_from_json(entries) -> FactorSignature:
    if not isinstance(entries, list):
        raise InputError("factors must be a list")
    out = []
    for n, e in enumerate(entries):
        kind = TYPE_KINDS.get(e.get("type"))
        if kind is None:
            raise InputError(f"factors[{n}]: unknown type {e.get('type')!r}")
        k, mult = e.get("k"), e.get("mult", 1)
        if not isinstance(k, int) or not isinstance(mult, int) or mult < 1:
            raise InputError(f"factors[{n}]: k and mult must be integers")
        support = None
        if kind == "W":
            support = form_from_json((e.get("support") or {}).get("form"), f"factors[{n}].support.form")
        out.extend([Factor(kind, k, support)] * mult)
    return FactorSignature(tuple(out))


# --- reports -------------------------------------------------------------------------


def filtration_to_json(fl: Filtration, bases: bool) -> dict:
    out = {"dims": dict(fl.dims)}
    if bases:
        out["bases"] = {
            name: [[format_rational(x) for x in row] for row in getattr(fl, name)]
            for name in ("E_minus", "U_minus", "E_mid", "U_mid")
        }
    return out


def report(p: Pair, c: Classification, filtration: Filtration | None = None, bases: bool = False) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "input": pair_to_json(p),
        "sheaf": signature_to_json(c.sheaf),
        "factors": factors_to_json(c.factors),
    }
    if filtration is not None:
        doc["filtration"] = filtration_to_json(filtration, bases)
    doc["augmented"] = is_augmented(c.factors)
    doc["strengthened"] = is_strengthened(c.factors)
    doc["orientation_anchor"] = ORIENTATION_ANCHOR
    return doc
