"""Elements of the three supported base fields: Q, Q(i) and Q(T).

A FieldElem carries its field tag next to an exact payload: a Fraction for Q,
a (real, imag) Fraction pair for Q(i), and a reduced QPoly fraction with monic
denominator for Q(T). Equality is structural; the representations are
canonical, so equal elements compare equal.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import BadParams, DivisionByZero, FieldMismatch, ParseError
from .parsing import parse_expression
from .qpoly import QP_ONE, QPoly, qpoly_gcd, qpoly_str

Q = "Q"
QI = "QI"
QT = "QT"
FIELDS = (Q, QI, QT)


def _as_frac(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if isinstance(r, int):
        return Fraction(r)
    raise BadParams(f"expected a rational, got {r!r}")


class FieldElem:
    __slots__ = ("field", "a", "b")

    def __init__(self, field: str, a, b=None):
        # Internal constructor; use q_elem / qi_elem / qt_elem / parse_element.
        self.field = field
        self.a = a
        self.b = b

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        if self.field == Q:
            return self.a == 0
        if self.field == QI:
            return self.a == 0 and self.b == 0
        return self.a.is_zero()

    def is_one(self) -> bool:
        return self == one(self.field)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElem)
            and self.field == other.field
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self) -> int:
        return hash((self.field, self.a, self.b))

    def __repr__(self) -> str:
        return f"<{self.field} {format_element(self)}>"

    # -- field-specific accessors --------------------------------------------

    @property
    def re(self) -> Fraction:
        if self.field != QI:
            raise FieldMismatch("re is only defined over Q(i)")
        return self.a

    @property
    def im(self) -> Fraction:
        if self.field != QI:
            raise FieldMismatch("im is only defined over Q(i)")
        return self.b

    @property
    def num(self) -> QPoly:
        if self.field != QT:
            raise FieldMismatch("num is only defined over Q(T)")
        return self.a

    @property
    def den(self) -> QPoly:
        if self.field != QT:
            raise FieldMismatch("den is only defined over Q(T)")
        return self.b

    def as_fraction(self) -> Fraction:
        """The value as a rational, for elements that happen to be rational."""
        if self.field == Q:
            return self.a
        if self.field == QI:
            if self.b != 0:
                raise FieldMismatch("element has nonzero imaginary part")
            return self.a
        if not self.b.is_const() or self.a.degree > 0:
            raise FieldMismatch("element is a nonconstant rational function")
        return self.a.coeff(0)

    def is_rational(self) -> bool:
        try:
            self.as_fraction()
            return True
        except FieldMismatch:
            return False

    # -- arithmetic ----------------------------------------------------------

    def _need(self, other: "FieldElem"):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise FieldMismatch(f"mixed operands: {self!r} vs {other!r}")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._need(other)
        if self.field == Q:
            return FieldElem(Q, self.a + other.a)
        if self.field == QI:
            return FieldElem(QI, self.a + other.a, self.b + other.b)
        return qt_elem(self.a * other.b + other.a * self.b, self.b * other.b)

    def __neg__(self) -> "FieldElem":
        if self.field == Q:
            return FieldElem(Q, -self.a)
        if self.field == QI:
            return FieldElem(QI, -self.a, -self.b)
        return FieldElem(QT, -self.a, self.b)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._need(other)
        if self.field == Q:
            return FieldElem(Q, self.a * other.a)
        if self.field == QI:
            return FieldElem(
                QI,
                self.a * other.a - self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return qt_elem(self.a * other.a, self.b * other.b)

    def inv(self) -> "FieldElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.field == Q:
            return FieldElem(Q, 1 / self.a)
        if self.field == QI:
            n = self.a * self.a + self.b * self.b
            return FieldElem(QI, self.a / n, -self.b / n)
        return qt_elem(self.b, self.a)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._need(other)
        return self * other.inv()

    def __pow__(self, n: int) -> "FieldElem":
        if not isinstance(n, int):
            raise BadParams("element powers take integer exponents")
        if n < 0:
            return self.inv() ** (-n)
        result = one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# -- factories ---------------------------------------------------------------


def q_elem(r) -> FieldElem:
    return FieldElem(Q, _as_frac(r))


def qi_elem(re, im=0) -> FieldElem:
    return FieldElem(QI, _as_frac(re), _as_frac(im))


def qt_elem(num: QPoly, den: QPoly = QP_ONE) -> FieldElem:
    if not isinstance(num, QPoly) or not isinstance(den, QPoly):
        raise BadParams("qt_elem takes QPoly numerator and denominator")
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return FieldElem(QT, QPoly(), QP_ONE)
    g = qpoly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lc = den.lead
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return FieldElem(QT, num, den)


def from_rational(field: str, r) -> FieldElem:
    r = _as_frac(r)
    if field == Q:
        return q_elem(r)
    if field == QI:
        return qi_elem(r, 0)
    if field == QT:
        return qt_elem(QPoly.const(r))
    raise BadParams(f"unknown field {field!r}")


def zero(field: str) -> FieldElem:
    return from_rational(field, 0)


def one(field: str) -> FieldElem:
    return from_rational(field, 1)


def gen(field: str) -> FieldElem:
    """The distinguished generator: i over Q(i), T over Q(T)."""
    if field == QI:
        return qi_elem(0, 1)
    if field == QT:
        return qt_elem(QPoly((0, 1)))
    raise BadParams(f"field {field!r} has no generator")


def qi_int_triple(x: FieldElem) -> tuple[int, int, int]:
    """Write x = (a + b i) / d with integers a, b and d > 0."""
    if x.field != QI:
        raise FieldMismatch("expected a Q(i) element")
    d = lcm(x.a.denominator, x.b.denominator)
    return int(x.a * d), int(x.b * d), d


# -- parsing and formatting --------------------------------------------------


class _ElemOps:
    def __init__(self, field: str):
        self.field = field

    def from_int(self, n: int) -> FieldElem:
        return from_rational(self.field, n)

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
            raise ParseError("division by zero in expression")
        return x / y

    @staticmethod
    def neg(x):
        return -x

    @staticmethod
    def pow_int(x, n):
        return x**n


def parse_element(text: str, field: str) -> FieldElem:
    if field not in FIELDS:
        raise BadParams(f"unknown field {field!r}")
    names = {}
    if field == QI:
        names["i"] = gen(QI)
    elif field == QT:
        names["T"] = gen(QT)
    return parse_expression(text, _ElemOps(field), names)


def _fmt_imag(im: Fraction) -> str:
    mag = -im if im < 0 else im
    body = "i" if mag == 1 else f"{mag}i"
    return ("-" if im < 0 else "") + body


def format_element(x: FieldElem) -> str:
    if x.field == Q:
        return str(x.a)
    if x.field == QI:
        if x.a == 0 and x.b == 0:
            return "0"
        if x.b == 0:
            return str(x.a)
        if x.a == 0:
            return _fmt_imag(x.b)
        tail = _fmt_imag(x.b)
        return f"{x.a}+{tail}" if not tail.startswith("-") else f"{x.a}{tail}"
    if x.b == QP_ONE:
        return qpoly_str(x.a, "T")
    return f"({qpoly_str(x.a, 'T')})/({qpoly_str(x.b, 'T')})"
