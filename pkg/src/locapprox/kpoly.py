"""Univariate polynomials in X whose coefficients are FieldElems.

Certificate polynomials and the restriction of a rational map component to one
coordinate both live here. Only the operations that the certificate machinery
needs are provided.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadParams, FieldMismatch, ParseError
from .parsing import parse_expression
from .elements import FieldElem, format_element, from_rational, gen, one, zero, QI, QT


class KPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: str, coeffs=()):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, FieldElem) or c.field != field:
                raise FieldMismatch("coefficient from the wrong field")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c: FieldElem) -> "KPoly":
        return KPoly(c.field, (c,))

    @staticmethod
    def var(field: str) -> "KPoly":
        return KPoly(field, (zero(field), one(field)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> FieldElem:
        if not self.coeffs:
            raise BadParams("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, n: int) -> FieldElem:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return zero(self.field)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        return f"KPoly({self.field}, {kpoly_str(self)})"

    def _need(self, other: "KPoly"):
        if not isinstance(other, KPoly) or other.field != self.field:
            raise FieldMismatch("mixed polynomial operands")

    def __add__(self, other: "KPoly") -> "KPoly":
        self._need(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return KPoly(self.field, out)

    def __neg__(self) -> "KPoly":
        return KPoly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "KPoly") -> "KPoly":
        return self + (-other)

    def __mul__(self, other: "KPoly") -> "KPoly":
        self._need(other)
        if not self.coeffs or not other.coeffs:
            return KPoly(self.field)
        out = [zero(self.field) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return KPoly(self.field, out)

    def scale(self, c: FieldElem) -> "KPoly":
        return KPoly(self.field, tuple(a * c for a in self.coeffs))

    def __pow__(self, n: int) -> "KPoly":
        if n < 0:
            raise BadParams("negative polynomial power")
        out = KPoly.const(one(self.field))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "KPoly":
        return KPoly(
            self.field,
            tuple(c * from_rational(self.field, i) for i, c in enumerate(self.coeffs) if i > 0),
        )

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reversed_eval(self, b: FieldElem) -> FieldElem:
        """sum a_i b^(d - i), the denominator of the selector element."""
        acc = zero(self.field)
        for c in self.coeffs:  # ascending i pairs with descending power of b
            acc = acc * b + c
        return acc

    def homog_eval(self, x: FieldElem, y: FieldElem) -> FieldElem:
        """sum a_i x^i y^(d-i) where d is the degree."""
        d = self.degree
        if d < 0:
            return zero(self.field)
        acc = zero(self.field)
        for i, c in enumerate(self.coeffs):
            acc = acc + c * x**i * y ** (d - i)
        return acc

    def shift(self, a: FieldElem) -> "KPoly":
        """p(X + a)."""
        xa = KPoly(self.field, (a, one(self.field)))
        acc = KPoly(self.field)
        for c in reversed(self.coeffs):
            acc = acc * xa + KPoly.const(c)
        return acc

    def rational_coeffs(self) -> list[Fraction]:
        """Coefficients as Fractions; FieldMismatch if any is non-rational."""
        return [c.as_fraction() for c in self.coeffs]


class _KOps:
    def __init__(self, field: str):
        self.field = field

    def from_int(self, n: int) -> KPoly:
        return KPoly.const(from_rational(self.field, n))

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def div(x, y):
        if y.is_zero():
            raise ParseError("division by zero in polynomial expression")
        if not y.is_const():
            raise ParseError("only division by constants is allowed here")
        return x.scale(y.coeff(0).inv())

    @staticmethod
    def neg(x):
        return -x

    @staticmethod
    def pow_int(x, n):
        return x**n


def parse_kpoly(text: str, field: str) -> KPoly:
    names = {"X": KPoly.var(field)}
    if field == QI:
        names["i"] = KPoly.const(gen(QI))
    elif field == QT:
        names["T"] = KPoly.const(gen(QT))
    return parse_expression(text, _KOps(field), names)


def kpoly_str(p: KPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for n in range(p.degree, -1, -1):
        c = p.coeff(n)
        if c.is_zero():
            continue
        cs = format_element(c)
        wrap = any(s in cs[1:] for s in "+-") or "/" in cs
        if n == 0:
            body = f"({cs})" if wrap else cs
        else:
            xpow = "X" if n == 1 else f"X^{n}"
            if c.is_one():
                body = xpow
            else:
                body = (f"({cs})" if wrap or cs.startswith("-") else cs) + "*" + xpow
        parts.append(body)
    out = parts[0]
    for body in parts[1:]:
        out += body if body.startswith("-") else "+" + body
    return out
