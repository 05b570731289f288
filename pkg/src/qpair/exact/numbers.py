"""Exact scalars: rationals, Gaussian rationals and rational quaternions."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

Rational = type(mpq())

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(value) -> Rational:
    """Coerce ``value`` (int, mpq, Fraction or a ``"p/q"`` string) to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        s = value.strip()
        if not _RATIONAL_RE.match(s):
            raise ValueError(f"malformed rational {value!r}")
        num, _, den = s.partition("/")
        if den and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den or 1))
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(q) -> str:
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Gauss:
    """An element ``re + I*im`` of Q(i).

    ``I`` is the unit of the complexification, not the quaternion ``i``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Rational) else rational(re)
        self.im = im if isinstance(im, Rational) else rational(im)

    @staticmethod
    def coerce(x) -> Gauss:
        if isinstance(x, Gauss):
            return x
        return Gauss(x, 0)

    def __add__(self, other):
        if not isinstance(other, Gauss):
            other = Gauss.coerce(other)
        return Gauss(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Gauss):
            other = Gauss.coerce(other)
        return Gauss(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Gauss.coerce(other) - self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, Gauss):
            if isinstance(other, (int, Rational)):
                return Gauss(self.re * other, self.im * other)
            other = Gauss.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return Gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> Gauss:
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return Gauss(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Gauss.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Gauss.coerce(other) * self.inverse()

    def conj(self) -> Gauss:
        return Gauss(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        return f"Gauss({format_gauss(self)!r})"

    def __str__(self):
        return format_gauss(self)


ZERO = Gauss(0, 0)
ONE = Gauss(1, 0)
I = Gauss(0, 1)


def _imag_part(token: str) -> Rational:
    if token in ("", "+"):
        return mpq(1)
    if token == "-":
        return mpq(-1)
    return rational(token)


def parse_gauss(text: str) -> Gauss:
    """Parse ``"a"``, ``"bI"`` or ``"a+bI"`` with rational ``a``, ``b``."""
    s = text.strip().replace(" ", "")
    try:
        if not s.endswith("I"):
            return Gauss(rational(s), 0)
        body = s[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split <= 0:
            return Gauss(0, _imag_part(body))
        return Gauss(rational(body[:split]), _imag_part(body[split:]))
    except ValueError:
        raise ValueError(f"malformed Gaussian rational {text!r}") from None


def format_gauss(z: Gauss) -> str:
    if z.im == 0:
        return format_rational(z.re)
    im = format_rational(abs(z.im))
    im = "" if im == "1" else im
    sign = "-" if z.im < 0 else "+"
    if z.re == 0:
        return f"{'-' if sign == '-' else ''}{im}I"
    return f"{format_rational(z.re)}{sign}{im}I"


class Quaternion:
    """``r + i*i + j*j + k*k`` with rational coefficients."""

    __slots__ = ("r", "i", "j", "k")

    def __init__(self, r=0, i=0, j=0, k=0):
        self.r = rational(r)
        self.i = rational(i)
        self.j = rational(j)
        self.k = rational(k)

    @classmethod
    def from_coords(cls, coords) -> Quaternion:
        r, i, j, k = coords
        return cls(r, i, j, k)

    def coords(self) -> tuple:
        return (self.r, self.i, self.j, self.k)

    def __add__(self, other):
        other = _as_quaternion(other)
        return Quaternion(self.r + other.r, self.i + other.i, self.j + other.j, self.k + other.k)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quaternion(other)
        return Quaternion(self.r - other.r, self.i - other.i, self.j - other.j, self.k - other.k)

    def __rsub__(self, other):
        return _as_quaternion(other) - self

    def __neg__(self):
        return Quaternion(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            s = rational(other)
            return Quaternion(self.r * s, self.i * s, self.j * s, self.k * s)
        a0, a1, a2, a3 = self.r, self.i, self.j, self.k
        b0, b1, b2, b3 = other.r, other.i, other.j, other.k
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            s = rational(other)
            return Quaternion(self.r / s, self.i / s, self.j / s, self.k / s)
        return self * other.inverse()

    def conj(self) -> Quaternion:
        return Quaternion(self.r, -self.i, -self.j, -self.k)

    def norm(self) -> Rational:
        return self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k

    def inverse(self) -> Quaternion:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conj() / n

    def is_imaginary_unit(self) -> bool:
        return self.r == 0 and self.norm() == 1

    def __bool__(self):
        return any(self.coords())

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.coords() == other.coords()
        if isinstance(other, (int, Rational, Fraction)):
            return self.coords() == (other, 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords())

    def __repr__(self):
        parts = ", ".join(format_rational(c) for c in self.coords())
        return f"Quaternion({parts})"

    def __str__(self):
        terms = []
        for c, unit in zip(self.coords(), ("", "i", "j", "k")):
            if not c:
                continue
            mag = format_rational(abs(c))
            body = unit if unit and mag == "1" else (f"({mag}){unit}" if unit and "/" in mag else mag + unit)
            terms.append(("-" if c < 0 else "+") + body)
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text[0] == "+" else text


def _as_quaternion(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    return Quaternion(x)


Q1 = Quaternion(1, 0, 0, 0)
QI = Quaternion(0, 1, 0, 0)
QJ = Quaternion(0, 0, 1, 0)
QK = Quaternion(0, 0, 0, 1)
