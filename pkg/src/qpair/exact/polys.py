"""Univariate polynomials over Q(i) and homogeneous binary forms.

A univariate polynomial is a tuple of :class:`Gauss` coefficients, lowest
degree first, with no trailing zeros (the zero polynomial is ``()``).

A :class:`BinaryForm` of degree ``d`` stores ``d + 1`` coefficients, entry
``t`` being the coefficient of ``z0**(d - t) * z1**t``.  Points of the
projective line are written ``zeta = z1 / z0``; the factor ``z0`` vanishes at
``zeta = infinity``.
"""

from __future__ import annotations

from functools import lru_cache

from .numbers import ONE, ZERO, Gauss, Rational, format_gauss

Poly = tuple

# --- univariate -------------------------------------------------------------


def p_trim(coeffs) -> Poly:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(Gauss.coerce(c) for c in coeffs)


def p_deg(p: Poly) -> int:
    """Degree; ``-1`` for the zero polynomial."""
    return len(p) - 1


def p_add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return p_trim(out)


def p_neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def p_sub(p: Poly, q: Poly) -> Poly:
    return p_add(p, p_neg(q))


def p_scale(p: Poly, c) -> Poly:
    c = Gauss.coerce(c)
    if not c:
        return ()
    return tuple(c * a for a in p)


def p_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return p_trim(out)


def p_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    if len(rem) - 1 < dq:
        return (), p_trim(rem)
    inv = q[-1].inverse()
    quot = [ZERO] * (len(rem) - dq)
    for s in range(len(rem) - 1 - dq, -1, -1):
        c = rem[s + dq] * inv
        quot[s] = c
        if c:
            for j, b in enumerate(q):
                rem[s + j] = rem[s + j] - c * b
    return p_trim(quot), p_trim(rem[:dq])


def p_monic(p: Poly) -> Poly:
    if not p:
        return p
    if p[-1] == ONE:
        return p
    return p_scale(p, p[-1].inverse())


def p_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    while q:
        p, q = q, p_divmod(p, q)[1]
    return p_monic(p)


def p_deriv(p: Poly) -> Poly:
    return p_trim(c * i for i, c in enumerate(p) if i)


def p_eval(p: Poly, x) -> Gauss:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def p_exact_div(p: Poly, q: Poly) -> Poly:
    quot, rem = p_divmod(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quot


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = c * prod(a_i ** i)`` with squarefree, coprime ``a_i``."""
    p = p_monic(p)
    if p_deg(p) < 1:
        return []
    dp = p_deriv(p)
    c = p_gcd(p, dp)
    w = p_exact_div(p, c)
    y = p_exact_div(dp, c)
    z = p_sub(y, p_deriv(w))
    out = []
    i = 1
    while p_deg(w) > 0:
        g = p_gcd(w, z)
        if p_deg(g) > 0:
            out.append((g, i))
        w = p_exact_div(w, g)
        y = p_exact_div(z, g)
        z = p_sub(y, p_deriv(w))
        i += 1
    return out


# --- binary forms -----------------------------------------------------------


class BinaryForm:
    """Homogeneous polynomial in ``(z0, z1)`` with Q(i) coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs, degree: int | None = None):
        coeffs = [Gauss.coerce(c) for c in coeffs]
        if degree is None:
            degree = len(coeffs) - 1
        if degree < 0:
            raise ValueError("a binary form needs at least one coefficient")
        if len(coeffs) > degree + 1:
            if any(coeffs[degree + 1:]):
                raise ValueError("too many coefficients for the degree")
            coeffs = coeffs[: degree + 1]
        coeffs += [ZERO] * (degree + 1 - len(coeffs))
        self.degree = degree
        self.coeffs = tuple(coeffs)

    @classmethod
    def homogenize(cls, p: Poly, degree: int | None = None) -> BinaryForm:
        if degree is None:
            degree = max(p_deg(p), 0)
        if p_deg(p) > degree:
            raise ValueError("degree too small to homogenize")
        return cls(list(p) or [ZERO], degree)

    @classmethod
    def constant(cls, c=1) -> BinaryForm:
        return cls([c], 0)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def dehomogenize(self) -> Poly:
        """``f(1, t)``; loses the factor ``z0 ** infinity_order``."""
        return p_trim(self.coeffs)

    def infinity_order(self) -> int:
        """Multiplicity of the root ``zeta = infinity`` (power of ``z0`` dividing f)."""
        if self.is_zero():
            raise ValueError("zero form")
        return self.degree - p_deg(self.dehomogenize())

    def normalized(self) -> BinaryForm:
        """Scale so that the first nonzero coefficient equals 1."""
        lead = next((c for c in self.coeffs if c), None)
        if lead is None or lead == ONE:
            return self
        inv = lead.inverse()
        return BinaryForm([c * inv for c in self.coeffs], self.degree)

    def __mul__(self, other: BinaryForm) -> BinaryForm:
        if not isinstance(other, BinaryForm):
            c = Gauss.coerce(other)
            return BinaryForm([c * a for a in self.coeffs], self.degree)
        out = [ZERO] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return BinaryForm(out, self.degree + other.degree)

    __rmul__ = __mul__

    def __add__(self, other: BinaryForm) -> BinaryForm:
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)], self.degree)

    def __pow__(self, e: int) -> BinaryForm:
        out = BinaryForm.constant()
        for _ in range(e):
            out = out * self
        return out

    def evaluate(self, z0, z1) -> Gauss:
        z0, z1 = Gauss.coerce(z0), Gauss.coerce(z1)
        acc = ZERO
        d = self.degree
        for t, c in enumerate(self.coeffs):
            if c:
                acc = acc + c * _gpow(z0, d - t) * _gpow(z1, t)
        return acc

    def substitute(self, n) -> BinaryForm:
        """``f(a z0 + b z1, c z0 + d z1)`` for ``n = ((a, b), (c, d))``."""
        (a, b), (c, d) = n
        w0 = BinaryForm([a, b])
        w1 = BinaryForm([c, d])
        out = BinaryForm([ZERO] * (self.degree + 1), self.degree)
        p0 = [BinaryForm.constant()]
        p1 = [BinaryForm.constant()]
        for _ in range(self.degree):
            p0.append(p0[-1] * w0)
            p1.append(p1[-1] * w1)
        for t, coeff in enumerate(self.coeffs):
            if coeff:
                out = out + (p0[self.degree - t] * p1[t]) * coeff
        return out

    def conj(self) -> BinaryForm:
        return BinaryForm([c.conj() for c in self.coeffs], self.degree)

    def sort_key(self):
        # descending coefficients, so that z0 sorts before z1
        return (self.degree, tuple((-c.re, -c.im) for c in self.coeffs))

    def same_up_to_scalar(self, other: BinaryForm) -> bool:
        return self.degree == other.degree and self.normalized() == other.normalized()

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __repr__(self):
        return f"BinaryForm({self})"

    def __str__(self):
        terms = []
        d = self.degree
        for t, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                s for s in (_mono("z0", d - t), _mono("z1", t)) if s
            )
            coeff = format_gauss(c)
            if mono:
                coeff = "" if c == ONE else f"({coeff})*"
                terms.append(f"{coeff}{mono}")
            else:
                terms.append(coeff)
        return " + ".join(terms) or "0"


def _mono(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def _gpow(x: Gauss, e: int) -> Gauss:
    out = ONE
    for _ in range(e):
        out = out * x
    return out


Z0 = BinaryForm([1, 0])
Z1 = BinaryForm([0, 1])


def linear_form_at(zeta) -> BinaryForm:
    """The normalized linear form vanishing at ``zeta`` (``None`` means infinity)."""
    if zeta is None:
        return Z0
    return BinaryForm([-Gauss.coerce(zeta), ONE]).normalized()


def form_divmod_exact(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Exact quotient ``f / g``; raises ArithmeticError when g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if f.is_zero():
        return BinaryForm([ZERO], f.degree - g.degree)
    if f.infinity_order() < g.infinity_order() or f.degree < g.degree:
        raise ArithmeticError("form division is not exact")
    q = p_exact_div(f.dehomogenize(), g.dehomogenize())
    return BinaryForm.homogenize(q, f.degree - g.degree)


def divides(g: BinaryForm, f: BinaryForm) -> bool:
    try:
        form_divmod_exact(f, g)
    except ArithmeticError:
        return False
    return True


def gcd_forms(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Normalized greatest common divisor of two binary forms."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero forms is undefined")
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    e = min(f.infinity_order(), g.infinity_order())
    h = p_gcd(f.dehomogenize(), g.dehomogenize())
    return BinaryForm.homogenize(h, p_deg(h) + e).normalized()


def multiplicity(b: BinaryForm, f: BinaryForm) -> int:
    """Largest ``e`` with ``b**e`` dividing ``f`` (``b`` nonconstant)."""
    if b.degree < 1:
        raise ValueError("multiplicity of a constant is undefined")
    e = 0
    while True:
        try:
            f = form_divmod_exact(f, b)
        except ArithmeticError:
            return e
        e += 1


def _squarefree_pieces(f: BinaryForm) -> list[BinaryForm]:
    pieces = []
    if f.infinity_order():
        pieces.append(Z0)
    for a, _ in squarefree_decomposition(f.dehomogenize()):
        pieces.append(BinaryForm.homogenize(a).normalized())
    return pieces


def coprime_basis(forms) -> list[BinaryForm]:
    """Pairwise coprime squarefree forms generating every input multiplicatively.

    Every input equals a constant times a product of powers of the returned
    forms.  The result is sorted by degree, then coefficients.
    """
    basis: list[BinaryForm] = []
    for f in forms:
        if f.is_zero():
            raise ValueError("coprime basis of the zero form")
        basis.extend(_squarefree_pieces(f))
    basis = _dedupe(basis)
    changed = True
    while changed:
        changed = False
        for x in range(len(basis)):
            for y in range(x + 1, len(basis)):
                a, b = basis[x], basis[y]
                g = gcd_forms(a, b)
                if g.degree == 0:
                    continue
                rest = [g, form_divmod_exact(a, g), form_divmod_exact(b, g)]
                basis = [h for i, h in enumerate(basis) if i not in (x, y)]
                basis.extend(h.normalized() for h in rest if h.degree > 0)
                basis = _dedupe(basis)
                changed = True
                break
            if changed:
                break
    return sorted(basis, key=BinaryForm.sort_key)


def _dedupe(forms) -> list[BinaryForm]:
    seen = {}
    for f in forms:
        f = f.normalized()
        seen.setdefault(f, f)
    return list(seen)


# --- irreducible factors (refinement of a coprime basis) --------------------


def irreducible_factors(f: BinaryForm) -> list[tuple[BinaryForm, int]]:
    """Factor ``f`` into normalized irreducible forms over Q(i) (sympy backend)."""
    out = []
    e = f.infinity_order()
    if e:
        out.append((Z0, e))
    p = f.dehomogenize()
    if p_deg(p) > 0:
        for g, mult in _sympy_factor(tuple(p)):
            out.append((BinaryForm.homogenize(g).normalized(), mult))
    return sorted(out, key=lambda fe: fe[0].sort_key())


@lru_cache(maxsize=4096)
def _sympy_factor(p: Poly) -> list[tuple[Poly, int]]:
    import sympy

    t = sympy.Symbol("t")
    expr = sum(
        (_to_sympy(c) * t**i for i, c in enumerate(p) if c), sympy.Integer(0)
    )
    poly = sympy.Poly(expr, t, domain=sympy.QQ_I)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = [_from_sympy(c) for c in reversed(fac.all_coeffs())]
        out.append((p_monic(p_trim(coeffs)), int(mult)))
    return out


def _to_sympy(c: Gauss):
    import sympy

    return sympy.Rational(int(c.re.numerator), int(c.re.denominator)) + sympy.I * sympy.Rational(
        int(c.im.numerator), int(c.im.denominator)
    )


def _from_sympy(expr) -> Gauss:
    import sympy

    re, im = sympy.Rational(sympy.re(expr)), sympy.Rational(sympy.im(expr))
    return Gauss(_q(re), _q(im))


def _q(r) -> Rational:
    from gmpy2 import mpq

    return mpq(int(r.p), int(r.q))
