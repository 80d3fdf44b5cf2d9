from fractions import Fraction

import pytest

from locapprox.elements import QT, parse_element, qt_elem, zero
from locapprox.errors import FieldMismatch
from locapprox.laurent import laurent_prefix, sign_at
from locapprox.qpoly import QPoly
from util import rand_elem, rng


def E(s):
    return parse_element(s, QT)


def test_prefix_frozen_finite():
    x = E("(T^2+1)/T")
    p = laurent_prefix(x, 0, 2)
    assert p.terms == ((-1, Fraction(1)), (1, Fraction(1)))
    assert p.exact
    assert p.to_element() == x

    q = laurent_prefix(E("1/(1-T)"), 0, 3)
    assert q.terms == tuple((k, Fraction(1)) for k in range(4))
    assert not q.exact
    assert E("1/(1-T)") - q.to_element() == E("T^4/(1-T)")


def test_prefix_frozen_infinity():
    x = E("(T^2+1)/T")
    p = laurent_prefix(x, None, -2)
    assert p.terms == ((-1, Fraction(1)), (1, Fraction(1)))
    assert p.exact

    q = laurent_prefix(E("1/(1-T)"), None, -2)
    assert q.terms == ((-2, Fraction(-1)), (-1, Fraction(-1)))
    assert not q.exact


def test_prefix_shifted_center():
    # 1/(T-2) + 3(T-2) around 2 is already its own prefix at order 1
    x = E("1/(T-2)") + E("3*(T-2)")
    p = laurent_prefix(x, 2, 1)
    assert p.terms == ((-1, Fraction(1)), (1, Fraction(3)))
    assert p.exact


def test_prefix_remainder_property():
    r = rng(21)
    for _ in range(80):
        x = rand_elem(r, QT, h=5, nonzero=True)
        for center in (None, Fraction(0), Fraction(1), Fraction(-2)):
            order = r.randint(-3, 3)
            p = laurent_prefix(x, center, order)
            diff = x - p.to_element()
            assert p.exact == diff.is_zero()
            if diff.is_zero():
                continue
            # the remainder must vanish to order beyond the cutoff
            if center is None:
                assert diff.num.degree - diff.den.degree < order
            else:
                sh_num = diff.num.shift(center)
                sh_den = diff.den.shift(center)
                vn = next(i for i in range(sh_num.degree + 1) if sh_num.coeff(i) != 0)
                vd = next(i for i in range(sh_den.degree + 1) if sh_den.coeff(i) != 0)
                assert vn - vd > order


def test_sign_frozen():
    assert sign_at(E("T"), 0, "+") == 1
    assert sign_at(E("T"), 0, "-") == -1
    assert sign_at(E("T"), 1, "+") == 1 and sign_at(E("T"), 1, "-") == 1
    assert sign_at(E("(T-1)^2"), 1, "+") == 1 and sign_at(E("(T-1)^2"), 1, "-") == 1
    assert sign_at(E("-1/(T-2)^3"), 2, "+") == -1
    assert sign_at(E("-1/(T-2)^3"), 2, "-") == 1
    assert sign_at(E("T"), None, "+") == 1
    assert sign_at(E("T"), None, "-") == -1
    assert sign_at(E("T^2"), None, "-") == 1
    assert sign_at(E("1/T"), None, "-") == -1
    assert sign_at(zero(QT), 0, "+") == 0


def test_sign_matches_evaluation_near_center():
    # exact signs agree with evaluation at points close to the center
    r = rng(22)
    for _ in range(80):
        x = rand_elem(r, QT, h=4, nonzero=True)
        for a in (Fraction(0), Fraction(1)):
            for side, eps in (("+", Fraction(1, 10**6)), ("-", -Fraction(1, 10**6))):
                s = sign_at(x, a, side)
                pt = a + eps
                num = x.num(pt)
                den = x.den(pt)
                if num == 0 or den == 0:
                    continue  # eps not small enough to dodge a root; skip
                val = num / den
                assert s == (1 if val > 0 else -1)


def test_sign_field_guard():
    with pytest.raises(FieldMismatch):
        sign_at(parse_element("1/2", "Q"), 0, "+")
