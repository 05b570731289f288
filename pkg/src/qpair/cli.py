"""The ``qpair`` command line.

Exit codes: 0 on success, 1 on bad input, 2 when an internal consistency
check fails.  Every failure writes ``{"error": ...}`` to standard error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

from . import io
from .classifier import (
    CHECK_POINTS,
    canonical_filtration,
    classify,
    factor_dimensions,
    filtration_violations,
    model_from_signature,
)
from .errors import ConsistencyError, InputError
from .exact import Gauss
from .pairs import (
    Pair,
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
from .pencil import _SECTIONS, CP1Point, build_pencil, eigensection_check, fiber_kernel_dim, reality_check
from .sheaf import rational_support, sheaf_signature, signature_violations

__all__ = ["main", "run"]

SAMPLE_ZETAS = (0, 1, 2, Gauss(0, 1), Gauss(1, 1) / 2, Gauss(-1, 2), None)


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


# --- file handling -----------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_pair(path: str) -> Pair:
    try:
        return validate(io.pair_from_json(_load_json(path)))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _emit_pair(p: Pair, args, stdout) -> None:
    _emit(io.dumps(io.pair_to_json(p), args.pretty), args.out, stdout)


def _load_sections(path: str):
    doc = _load_json(path)
    sections = doc.get("sections") if isinstance(doc, dict) else None
    if not isinstance(sections, list) or len(sections) != 2:
        raise InputError(f"{path}: expected {{'sections': [[v, w], [v, w]]}}")
    out = []
    for n, pair in enumerate(sections):
        if not isinstance(pair, list) or len(pair) != 2 or any(not isinstance(v, list) or len(v) != 4 for v in pair):
            raise InputError(f"{path}: sections[{n}] must hold two vectors of length 4")
        out.append(tuple(tuple(io.gauss_from_json(x, f"sections[{n}][{m}][{r}]") for r, x in enumerate(v)) for m, v in enumerate(pair)))
    return tuple(out)


# --- commands ------------------------------------------------------------------------


def _text_report(name: str, p: Pair, c, fl) -> str:
    s = c.sheaf
    lines = [
        f"{name}: U of real dimension {p.dim} in H^{p.k}",
        f"  kernel degrees:   {list(s.kernel_degrees)}",
        f"  cokernel degrees: {list(s.cokernel_degrees)}",
    ]
    for o in s.torsion:
        support = rational_support(o.support_form)
        where = (
            ", ".join(str(x.u) for x in support)
            if support is not None
            else ", ".join("(" + ", ".join(f"{x:.6f}" for x in v) + ")" for v in o.numeric_support)
        )
        lines.append(f"  torsion at {where}: partition {list(o.partition)}, length {o.length}")
    lines.append(f"  factors: {c.factors}")
    if fl is not None:
        lines.append("  filtration dims: " + ", ".join(f"{key} {value}" for key, value in fl.dims.items()))
    return "\n".join(lines) + "\n"


def _pair_files(target: str) -> list[str]:
    if os.path.isdir(target):
        files = sorted(os.path.join(target, f) for f in os.listdir(target) if f.endswith(".json"))
        if not files:
            raise InputError(f"{target}: no .json files")
        return files
    return [target]


def cmd_classify(args, stdout) -> int:
    chunks = []
    for path in _pair_files(args.file):
        p = _load_pair(path)
        c = classify(p)
        fl = canonical_filtration(p, c.sheaf) if args.filtration else None
        if args.json:
            chunks.append(io.dumps(io.report(p, c, fl, bases=fl is not None), args.pretty))
        else:
            chunks.append(_text_report(path, p, c, fl))
    _emit("".join(chunks), args.out, stdout)
    return 0


def cmd_generate(args, stdout) -> int:
    if args.k < 0:
        raise InputError("--k must be a natural number")
    if args.k > io.max_k():
        raise InputError(f"--k {args.k} exceeds QPAIR_MAX_K = {io.max_k()}")
    kind = args.type
    if kind == "W":
        if args.support is None:
            raise InputError("--type W requires --support")
        if args.k < 1:
            raise InputError("--type W requires --k >= 1")
        p = gen_W(args.k, sphere_point_from_zeta(io.parse_zeta(args.support)))
    elif args.support is not None:
        raise InputError(f"--support only applies to --type W, not {kind}")
    else:
        base = gen_U(args.k) if kind in ("U", "Ustar") else gen_V(args.k)
        p = dual(base) if kind.endswith("star") else base
    _emit_pair(validate(p), args, stdout)
    return 0


def cmd_dual(args, stdout) -> int:
    _emit_pair(validate(dual(_load_pair(args.file))), args, stdout)
    return 0


def cmd_product(args, stdout) -> int:
    rotation = io.parse_rotation(args.rotation) if args.rotation else None
    p = product(_load_pair(args.first), _load_pair(args.second), rotation)
    if p.k > io.max_k():
        raise InputError(f"product dimension {p.k} exceeds QPAIR_MAX_K = {io.max_k()}")
    _emit_pair(p, args, stdout)
    return 0


def cmd_transform(args, stdout) -> int:
    p = _load_pair(args.file)
    _emit_pair(act(random_automorphism(p.k, args.seed), p), args, stdout)
    return 0


def run_checks(p: Pair, sections=_SECTIONS) -> tuple[list[dict], object]:
    """The full invariant suite on one pair; raises on the first failure."""
    done = []

    def passed(name, detail=""):
        done.append({"name": name, "ok": True, "detail": detail})

    def fail(name, detail):
        raise ConsistencyError(f"{name}: {detail}")

    for zeta in CHECK_POINTS:
        eigensection_check(p.k, zeta, sections)
    passed("conventions", f"{len(CHECK_POINTS)} points")

    P = build_pencil(p)
    P_orth = build_pencil(p, "orthogonal")
    reality_check(P)
    reality_check(P_orth)
    passed("reality")

    c = classify(p)
    problems = signature_violations(c.sheaf, p.k, p.dim)
    if problems:
        fail("identities", "; ".join(problems))
    passed("identities")

    for zeta in SAMPLE_ZETAS:
        x = CP1Point.from_zeta(zeta)
        d = intersection_dim(p, x.sphere_point())
        if 2 * fiber_kernel_dim(P, x) != d:
            fail("fiber oracle", f"pencil rank disagrees with dim(U & JU) at zeta = {zeta}")
        m, _, _ = complex_decompose(complex_view(p, x.sphere_point()))
        if 2 * m != d:
            fail("complex view", f"complex decomposition disagrees at zeta = {zeta}")
    passed("fiber oracle", f"{len(SAMPLE_ZETAS)} points")
    passed("complex view", f"{len(SAMPLE_ZETAS)} points")

    for o in c.sheaf.torsion:
        for q in rational_support(o.support_form) or ():
            if intersection_dim(p, q) == 0:
                fail("torsion support", f"U & qU vanishes at the support point {q.u}")
    passed("torsion support")

    if sheaf_signature(P_orth) != c.sheaf:
        fail("quotient independence", "orthogonal quotient gives a different signature")
    passed("quotient independence")

    if factor_dimensions(c.factors) != (p.k, p.dim):
        fail("dimensions", f"factors reconstruct {factor_dimensions(c.factors)}")
    passed("dimensions")

    fl = canonical_filtration(p, c.sheaf)
    problems = filtration_violations(p, fl)
    if problems:
        fail("filtration", "; ".join(problems))
    passed("filtration", json.dumps(fl.dims, separators=(",", ":")))

    if all(f.support is None or rational_support(f.support) is not None for f in c.factors.factors) and all(
        f.support is None or f.support.degree == 2 for f in c.factors.factors
    ):
        if classify(model_from_signature(c.factors)).factors != c.factors:
            fail("model round trip", "the model of the signature classifies differently")
        passed("model round trip")
    return done, c


def _compare_report(doc, p: Pair, c) -> None:
    try:
        claimed_sheaf = io.signature_from_json(doc.get("sheaf"))
        claimed_factors = io.factors_from_json(doc.get("factors", []))
    except (AttributeError, TypeError) as exc:
        raise InputError(f"malformed report ({exc})") from None
    if claimed_sheaf != c.sheaf:
        raise ConsistencyError("report sheaf signature does not match the recomputed one")
    if claimed_factors != c.factors:
        raise ConsistencyError("report factors do not match the recomputed ones")
    expected = io.report(p, c)
    for key in ("augmented", "strengthened", "orientation_anchor"):
        if key in doc and doc[key] != expected[key]:
            raise ConsistencyError(f"report field {key!r} does not match")


def cmd_check(args, stdout) -> int:
    doc = _load_json(args.file)
    sections = _load_sections(args.eigensections) if args.eigensections else _SECTIONS
    is_report = isinstance(doc, dict) and "sheaf" in doc
    if is_report:
        io._check_version(doc, "report")
    p = validate(io.pair_from_json(doc.get("input") if is_report else doc))
    checks, c = run_checks(p, sections)
    if is_report:
        _compare_report(doc, p, c)
        checks.append({"name": "report", "ok": True, "detail": "matches recomputation"})
    out = {
        "format_version": io.FORMAT_VERSION,
        "file": args.file,
        "status": "ok",
        "checks": checks,
        "torsion_length": c.sheaf.torsion_length,
    }
    stdout.write(io.dumps(out, args.pretty))
    return 0


def cmd_selftest(args, stdout) -> int:
    from .acceptance import run

    results = []
    for number in args.only or range(1, 13):
        r = run(number)
        results.append(r)
        if not args.json:
            stdout.write(r.line() + "\n")
            stdout.flush()
    ok = all(r.passed for r in results)
    if args.json:
        doc = {
            "format_version": io.FORMAT_VERSION,
            "criteria": [
                {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results
            ],
            "passed": ok,
        }
        stdout.write(io.dumps(doc, args.pretty))
    else:
        stdout.write(f"{sum(r.passed for r in results)}/{len(results)} criteria pass\n")
    return 0 if ok else 2


# --- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpair", description="Exact classification of real subspaces of H^k.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, out=True):
        sp.add_argument("--pretty", action="store_true", help="indent JSON output")
        if out:
            sp.add_argument("--out", help="write to this file instead of standard output")

    sp = sub.add_parser("classify", help="classify a pair file or every .json file in a directory")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true", help="emit the JSON report")
    sp.add_argument("--filtration", action="store_true", help="include the canonical filtration")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("generate", help="write a model pair")
    sp.add_argument("--type", required=True, choices=("U", "V", "W", "Ustar", "Vstar"))
    sp.add_argument("--k", required=True, type=int)
    sp.add_argument("--support", help="support coordinate zeta for W, e.g. 1, 1/2+I or inf")
    common(sp)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("dual", help="write the dual pair")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("product", help="write the product of two pairs")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--rotation", help="unit quaternion r,i,j,k applied to the second factor")
    common(sp)
    sp.set_defaults(func=cmd_product)

    sp = sub.add_parser("transform", help="apply a seeded random automorphism")
    sp.add_argument("file")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("check", help="run every invariant check on a pair or a report")
    sp.add_argument("file")
    sp.add_argument("--eigensections", help="JSON file overriding the eigensection coefficients")
    common(sp, out=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("selftest", help="run the acceptance suite")
    sp.add_argument("--only", type=int, action="append", choices=range(1, 13), metavar="N")
    sp.add_argument("--json", action="store_true")
    common(sp, out=False)
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, quiet: bool = False) -> int:
    """Run one command; returns the exit code.  ``quiet`` discards all output."""
    stdout, stderr = sys.stdout, sys.stderr
    if quiet:
        stdout = stderr = open(os.devnull, "w")
    with contextlib.ExitStack() as stack:
        if quiet:
            stack.callback(stdout.close)
        try:
            args = build_parser().parse_args(argv)
            return args.func(args, stdout)
        except InputError as exc:
            stderr.write(io.dumps({"error": str(exc), "kind": "input"}))
            return 1
        except ConsistencyError as exc:
            stderr.write(io.dumps({"error": str(exc), "kind": "consistency"}))
            return 2
        except OSError as exc:
            stderr.write(io.dumps({"error": str(exc), "kind": "input"}))
            return 1


def run() -> None:
    sys.exit(main())
