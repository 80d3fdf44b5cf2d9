"""Laurent expansion prefixes of rational functions, and exact sign data at
the ordered places of Q(T).

Conventions: at a finite center a the local parameter is u = T - a and a
prefix of order m keeps the u-exponents <= m. At infinity the prefix of order
m keeps the T-exponents >= m (the local parameter is 1/T, so this is again
"everything at least as big as the cutoff").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams, FieldMismatch
from .qpoly import QP_ONE, QPoly
from .elements import QT, FieldElem, qt_elem


def _split_power(p: QPoly) -> tuple[int, QPoly]:
    """p = X^v * rest with rest(0) != 0. p must be nonzero."""
    v = 0
    while p.coeff(v) == 0:
        v += 1
    return v, QPoly(p.coeffs[v:])


def _series_quotient(n0: QPoly, d0: QPoly, length: int) -> list[Fraction]:
    """First `length` coefficients of the power series n0/d0, d0(0) != 0."""
    inv0 = 1 / d0.coeff(0)
    out: list[Fraction] = []
    for k in range(length):
        acc = n0.coeff(k)
        for j in range(k):
            acc -= out[j] * d0.coeff(k - j)
        out.append(acc * inv0)
    return out


@dataclass(frozen=True)
class LaurentPrefix:
    center: Fraction | None  # None means the place at infinity
    order: int
    terms: tuple[tuple[int, Fraction], ...]  # (exponent, coefficient), sorted
    exact: bool

    def to_element(self) -> FieldElem:
        """The prefix itself as an element of Q(T)."""
        if self.center is None:
            shift = min(min((e for e, _ in self.terms), default=0), 0)
            num = QPoly()
            for e, c in self.terms:
                num = num + QPoly.monomial(c, e - shift)
            return qt_elem(num, QPoly.monomial(1, -shift))
        u = qt_elem(QPoly((-self.center, 1)))
        acc = qt_elem(QPoly())
        for e, c in self.terms:
            acc = acc + qt_elem(QPoly.const(c)) * u**e
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        var = "T" if self.center is None else (
            "T" if self.center == 0 else f"(T-{self.center})" if self.center > 0 else f"(T+{-self.center})"
        )
        parts = []
        for e, c in self.terms:
            if e == 0:
                body = str(c if c > 0 else -c)
            else:
                p = var if e == 1 else f"{var}^{e}"
                mag = c if c > 0 else -c
                body = p if mag == 1 else f"{mag}*{p}"
            parts.append(("-" if c < 0 else "+") + body)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def laurent_prefix(x: FieldElem, center, order: int) -> LaurentPrefix:
    """Laurent prefix of x at the given center (None for infinity).

    Finite center: terms with (T-a)-exponent <= order. Infinity: terms with
    T-exponent >= order. The exact flag records whether the prefix equals x.
    """
    if x.field != QT:
        raise FieldMismatch("laurent prefixes are for Q(T) elements")
    a = None if center is None else Fraction(center)
    if x.is_zero():
        return LaurentPrefix(a, order, (), True)
    if a is None:
        dn, dd = x.num.degree, x.den.degree
        ntil = x.num.reversed_coeffs()
        dtil = x.den.reversed_coeffs()
        val_u = dd - dn
        length = (-order) - val_u + 1
        if length <= 0:
            return LaurentPrefix(a, order, (), False)
        series = _series_quotient(ntil, dtil, length)
        terms = tuple(
            (-(val_u + k), c) for k, c in enumerate(series) if c != 0
        )
    else:
        nsh = x.num.shift(a)
        dsh = x.den.shift(a)
        vn, n0 = _split_power(nsh)
        vd, d0 = _split_power(dsh)
        val = vn - vd
        length = order - val + 1
        if length <= 0:
            return LaurentPrefix(a, order, (), False)
        series = _series_quotient(n0, d0, length)
        terms = tuple((val + k, c) for k, c in enumerate(series) if c != 0)
    terms = tuple(sorted(terms))
    prefix = LaurentPrefix(a, order, terms, False)
    exact = (x - prefix.to_element()).is_zero()
    if exact:
        return LaurentPrefix(a, order, terms, True)
    return prefix


def sign_at(x: FieldElem, center, side: str) -> int:
    """Sign of x under the ordering 'just to one side' of a center.

    center None with side '+' is the ordering at +infinity, side '-' the one
    at -infinity. Finite center a with side '+' orders by signs at a + eps.
    """
    if x.field != QT:
        raise FieldMismatch("sign_at is for Q(T) elements")
    if side not in ("+", "-"):
        raise BadParams("side must be '+' or '-'")
    if x.is_zero():
        return 0
    if center is None:
        c = x.num.lead / x.den.lead
        k = x.num.degree - x.den.degree
        s = 1 if c > 0 else -1
        if side == "-" and k % 2 != 0:
            s = -s
        return s
    a = Fraction(center)
    vn, n0 = _split_power(x.num.shift(a))
    vd, d0 = _split_power(x.den.shift(a))
    c = n0.coeff(0) / d0.coeff(0)
    k = vn - vd
    s = 1 if c > 0 else -1
    if side == "-" and k % 2 != 0:
        s = -s
    return s
