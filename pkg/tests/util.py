"""Shared generators for seeded property-style tests."""

import random
from fractions import Fraction

from locapprox.elements import Q, QI, QT, q_elem, qi_elem, qt_elem
from locapprox.localities import (
    complex_abs,
    composite,
    degree_val,
    gauss_prime,
    order_at,
    order_at_inf,
    p_adic,
    poly_adic,
    real_order,
)
from locapprox.qpoly import QPoly


def rng(seed=0):
    return random.Random(seed)


def rand_frac(r, h=20):
    return Fraction(r.randint(-h, h), r.randint(1, h))


def rand_nonzero_frac(r, h=20):
    while True:
        x = rand_frac(r, h)
        if x != 0:
            return x


def rand_qpoly(r, max_deg=4, h=9, nonzero=False):
    while True:
        deg = r.randint(0, max_deg)
        p = QPoly([Fraction(r.randint(-h, h)) for _ in range(deg + 1)])
        if not nonzero or not p.is_zero():
            return p


def rand_elem(r, field, h=12, nonzero=False):
    while True:
        if field == Q:
            x = q_elem(rand_frac(r, h))
        elif field == QI:
            x = qi_elem(rand_frac(r, h), rand_frac(r, h))
        else:
            x = qt_elem(rand_qpoly(r, 3, h), rand_qpoly(r, 2, h, nonzero=True))
        if not nonzero or not x.is_zero():
            return x


def catalog_sample(field):
    """A representative spread of nontrivial localities per field."""
    if field == Q:
        return [p_adic(2), p_adic(3), p_adic(7), real_order()]
    if field == QI:
        return [
            gauss_prime((1, 1)),
            gauss_prime((2, 1)),
            gauss_prime((3, 0)),
            complex_abs(),
        ]
    return [
        poly_adic(QPoly((0, 1))),
        poly_adic(QPoly((-1, 1))),
        poly_adic(QPoly((1, 0, 1))),
        degree_val(),
        order_at(0, "+"),
        order_at(0, "-"),
        order_at(2, "+"),
        order_at_inf("+"),
        order_at_inf("-"),
        composite(0, p_adic(2)),
        composite(0, p_adic(3)),
        composite(1, p_adic(2)),
    ]
