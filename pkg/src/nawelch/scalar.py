"""Exact arithmetic in Q(t) with the t-adic valuation.

Elements are reduced rational functions ``num/den`` with a monic
denominator, so equality is structural.  Absolute values are never
materialised: ``|x| = c**(-v(x))`` for some fixed ``c > 1``, and every
comparison is done on valuations.  The valuation of zero is ``INF``
(``math.inf``), which compares greater than every integer and absorbs
addition.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from flint import fmpq, fmpq_poly

from .errors import DivisionByZero, ScalarSyntaxError

INF = math.inf

Valuation = Union[int, float]
Number = Union[int, Fraction]


def _to_fmpq(c: Number) -> fmpq:
    if isinstance(c, Fraction):
        return fmpq(c.numerator, c.denominator)
    return fmpq(c)


class Poly:
    """Polynomial in ``t`` over Q, backed by FLINT's ``fmpq_poly``.

    ``coeffs`` lists the coefficients as Fractions from degree 0 upward;
    the zero polynomial has no coefficients.
    """

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self._p = fmpq_poly([_to_fmpq(c) for c in coeffs])

    @classmethod
    def _wrap(cls, p: fmpq_poly) -> Poly:
        out = object.__new__(cls)
        out._p = p
        return out

    @classmethod
    def constant(cls, c: Number) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> Poly:
        return cls([0] * degree + [c])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(c.p), int(c.q)) for c in self._p.coeffs())

    def __bool__(self) -> bool:
        return not self._p.is_zero()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self._p == other._p

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    @property
    def degree(self) -> int:
        return self._p.degree()

    @property
    def lead(self) -> Fraction:
        c = self._p[self._p.degree()]
        return Fraction(int(c.p), int(c.q))

    def ord(self) -> int:
        """Index of the lowest nonzero coefficient; ValueError for zero."""
        p = self._p
        for i in range(p.degree() + 1):
            if p[i] != 0:
                return i
        raise ValueError("ord of the zero polynomial")

    def is_one(self) -> bool:
        return self._p.is_one()

    def __neg__(self) -> Poly:
        return Poly._wrap(-self._p)

    def __add__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p + other._p)

    def __sub__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p - other._p)

    def __mul__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p * other._p)

    def scale(self, c: Number) -> Poly:
        return Poly._wrap(self._p * _to_fmpq(c))

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other:
            raise DivisionByZero("polynomial division by zero")
        q, r = divmod(self._p, other._p)
        return Poly._wrap(q), Poly._wrap(r)

    def exact_div(self, other: Poly) -> Poly:
        return Poly._wrap(self._p / other._p)

    def monic(self) -> Poly:
        if not self:
            return self
        return Poly._wrap(self._p / self._p[self._p.degree()])

    def derivative(self) -> Poly:
        return Poly._wrap(self._p.derivative())

    def __call__(self, x: Number) -> Fraction:
        c = self._p(_to_fmpq(x))
        return Fraction(int(c.p), int(c.q))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (FLINT normalises to a monic result)."""
    if not a and not b:
        return Poly()
    return Poly._wrap(a._p.gcd(b._p)).monic()


_ONE_POLY = Poly((1,))
_ZERO_POLY = Poly()


class Scalar:
    """Element of Q(t) in canonical form (coprime, monic denominator)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Number = 0, den: Poly | Number = 1):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if not isinstance(den, Poly):
            den = Poly.constant(den)
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            num, den = _ZERO_POLY, _ONE_POLY
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if den.lead != 1:
            inv = 1 / den.lead
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> Scalar:
        s = object.__new__(cls)
        s.num = num
        s.den = den
        return s

    @classmethod
    def coerce(cls, x: Scalar | Number) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw(Poly.constant(x), _ONE_POLY)
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    @classmethod
    def t(cls, power: int = 1) -> Scalar:
        if power >= 0:
            return cls._raw(Poly.monomial(power), _ONE_POLY)
        return cls._raw(_ONE_POLY, Poly.monomial(-power))

    @classmethod
    def parse(cls, text: str) -> Scalar:
        return parse_scalar(text)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.den.is_one() and len(self.num.coeffs) <= 1:
            return hash(self.num.coeffs[0] if self.num else 0)
        return hash((self.num, self.den))

    def __neg__(self) -> Scalar:
        return Scalar._raw(-self.num, self.den)

    def __add__(self, other: Scalar | Number) -> Scalar:
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if self.den.is_one():
                return Scalar._raw(self.num + other.num, _ONE_POLY)
            return Scalar(self.num + other.num, self.den)
        # Knuth: with g = gcd(d1, d2) only the gcd of the numerator with g remains
        g = poly_gcd(self.den, other.den)
        if g.is_one():
            return Scalar._raw(self.num * other.den + other.num * self.den, self.den * other.den)
        d1, d2 = self.den.exact_div(g), other.den.exact_div(g)
        num = self.num * d2 + other.num * d1
        if not num:
            return ZERO
        g2 = poly_gcd(num, g)
        return Scalar._raw(num.exact_div(g2), d1 * d2 * g.exact_div(g2))

    __radd__ = __add__

    def __sub__(self, other: Scalar | Number) -> Scalar:
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other: Number) -> Scalar:
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other: Scalar | Number) -> Scalar:
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, _ONE_POLY)
        # cross-cancel before multiplying, as Fraction does
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num.exact_div(g1), other.den.exact_div(g1)
        n2, d1 = other.num.exact_div(g2), self.den.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        inv = 1 / den.lead
        return Scalar._raw(num.scale(inv), den.scale(inv))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self.num:
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        inv = 1 / den.lead
        return Scalar._raw(num.scale(inv), den.scale(inv))

    def __truediv__(self, other: Scalar | Number) -> Scalar:
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> Scalar:
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def valuation(self) -> Valuation:
        if not self.num:
            return INF
        return self.num.ord() - self.den.ord()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.is_one()

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar()
ONE = Scalar(1)
T = Scalar.t()


def scalar_add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def scalar_mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def scalar_neg(x: Scalar) -> Scalar:
    return -x


def scalar_inv(x: Scalar) -> Scalar:
    return x.inverse()


def valuation(x: Scalar | Number) -> Valuation:
    return Scalar.coerce(x).valuation()


def abs_cmp(x: Scalar | Number, a: int, y: Scalar | Number, b: int) -> int:
    """Compare ``|x|**a`` with ``|y|**b``; returns -1, 0 or 1.

    Larger absolute value means smaller valuation, so the integer
    comparison of ``a*v(x)`` and ``b*v(y)`` is reversed.
    """
    if a < 1 or b < 1:
        raise ValueError("exponents must be positive integers")
    va = a * valuation(x)
    vb = b * valuation(y)
    if va == vb:
        return 0
    return -1 if va > vb else 1


def eq2_check(lambdas: Sequence[Scalar | Number]) -> bool:
    """Check ``|sum l_j^2| == max |l_j|^2`` on valuations."""
    if not lambdas:
        raise ValueError("eq2_check needs a nonempty sequence")
    xs = [Scalar.coerce(x) for x in lambdas]
    total = ZERO
    for x in xs:
        total = total + x * x
    return total.valuation() == min(2 * x.valuation() for x in xs)


def format_valuation(v: Valuation) -> int | str:
    return "inf" if v == INF else int(v)


def parse_valuation(text: str | int) -> Valuation:
    if isinstance(text, int):
        return text
    s = text.strip().lower()
    if s in ("inf", "+inf", "∞", "+∞"):
        return INF
    return int(s)


# --- text form -------------------------------------------------------------


def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _format_fraction(mag)
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if mag == 1 else f"{_format_fraction(mag)}*{mono}"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(sign + body)
    return "".join(parts)


def format_scalar(x: Scalar) -> str:
    if x.den.is_one():
        return format_poly(x.num)
    return f"({format_poly(x.num)})/({format_poly(x.den)})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ScalarSyntaxError(message, self.text, self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        n = self.integer()
        if self.peek() == "/" and self._next_is_digit():
            self.pos += 1
            d = self.integer()
            if d == 0:
                self.error("zero denominator")
            return Fraction(n, d)
        return Fraction(n)

    def _next_is_digit(self) -> bool:
        j = self.pos + 1
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return j < len(self.text) and self.text[j].isdigit()

    def monomial(self) -> int:
        self.expect("t")
        if self.peek() == "^":
            self.pos += 1
            if self.peek() in "+-":
                self.error("negative powers of t must be written as fractions")
            return self.integer()
        return 1

    def term(self) -> Poly:
        ch = self.peek()
        if ch == "t":
            return Poly.monomial(self.monomial())
        if not ch.isdigit():
            self.error("expected a term")
        c = self.rational()
        nxt = self.peek()
        if nxt == "*":
            self.pos += 1
            return Poly.monomial(self.monomial(), c)
        if nxt == "t":
            return Poly.monomial(self.monomial(), c)
        return Poly.constant(c)

    def poly(self) -> Poly:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        acc = self.term().scale(sign)
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            acc = acc + self.term().scale(sign)
        return acc

    def scalar(self) -> Scalar:
        if self.peek() == "(":
            self.pos += 1
            num = self.poly()
            self.expect(")")
            self.expect("/")
            self.expect("(")
            den = self.poly()
            self.expect(")")
            if not den:
                self.error("zero denominator")
            out = Scalar(num, den)
        else:
            out = Scalar(self.poly())
        if self.peek():
            self.error("unexpected trailing input")
        return out


def parse_scalar(text: str) -> Scalar:
    """Parse the textual scalar form, e.g. ``"3/5"``, ``"1-2t^2"``, ``"(2t)/(1+t^2)"``."""
    return _Parser(text).scalar()


def to_scalar(x: Scalar | Number | str) -> Scalar:
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar.coerce(x)
