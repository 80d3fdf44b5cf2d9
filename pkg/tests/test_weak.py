from fractions import Fraction

import pytest

from locapprox.elements import Q, QI, QT, parse_element, q_elem, qi_elem
from locapprox.errors import (
    BadParams,
    DependentInputs,
    FieldMismatch,
    TrivialLocality,
    ZeroModulus,
)
from locapprox.localities import (
    complex_abs,
    composite,
    contains,
    degree_val,
    gauss_prime,
    in_max_ideal,
    order_at,
    order_at_inf,
    p_adic,
    poly_adic,
    real_order,
    trivial,
)
from locapprox.qpoly import QPoly
from locapprox.weak import weak_approx
from util import rand_elem, rng


def ok(v, y, x, z, strict):
    w = (y - x) / z
    return in_max_ideal(v, w) if strict else contains(v, w)


def check_all(targets, y):
    for v, x, z, strict in targets:
        assert ok(v, y, x, z, strict), (v, y, x, z, strict)


class TestRationals:
    def test_two_congruences_and_a_window(self):
        t = [
            (p_adic(2), q_elem(1), q_elem(8), False),
            (p_adic(3), q_elem(2), q_elem(9), False),
            (real_order(), q_elem(Fraction(1, 2)), q_elem(Fraction(1, 10)), True),
        ]
        assert weak_approx(t) == q_elem(Fraction(61, 125))

    def test_congruences_only(self):
        t = [
            (p_adic(2), q_elem(1), q_elem(8), False),
            (p_adic(3), q_elem(2), q_elem(9), False),
        ]
        assert weak_approx(t) == q_elem(65)

    def test_single_target_returns_center(self):
        t = [(real_order(), q_elem(Fraction(1, 3)), q_elem(Fraction(1, 100)), True)]
        assert weak_approx(t) == q_elem(Fraction(1, 3))

    def test_negative_depth_congruence(self):
        # a ball wider than the ring: the congruence disappears but the
        # answer must still clear the center's denominator correctly
        t = [
            (p_adic(2), q_elem(Fraction(3, 4)), q_elem(8), False),
            (p_adic(5), q_elem(0), q_elem(Fraction(1, 25)), False),
        ]
        y = weak_approx(t)
        check_all(t, y)

    def test_aux_prime_controls_denominator(self):
        t = [
            (p_adic(2), q_elem(1), q_elem(8), False),
            (real_order(), q_elem(Fraction(1, 2)), q_elem(Fraction(1, 10)), True),
        ]
        y = weak_approx(t, aux_prime=7)
        check_all(t, y)
        n = y.a.denominator
        while n % 7 == 0:
            n //= 7
        assert n == 1

    def test_aux_prime_collision(self):
        t = [
            (p_adic(2), q_elem(1), q_elem(8), False),
            (real_order(), q_elem(0), q_elem(1), True),
        ]
        with pytest.raises(BadParams):
            weak_approx(t, aux_prime=2)

    def test_random_instances(self):
        r = rng("weak-q")
        places = [p_adic(2), p_adic(3), p_adic(5), real_order()]
        for _ in range(60):
            k = r.randint(2, 4)
            vs = r.sample(places, k)
            t = [
                (v, rand_elem(r, Q, h=9), rand_elem(r, Q, h=9, nonzero=True), bool(r.getrandbits(1)))
                for v in vs
            ]
            check_all(t, weak_approx(t))


class TestGaussianRationals:
    def test_frozen_instance(self):
        t = [
            (gauss_prime((1, 1)), qi_elem(0), qi_elem(2), False),
            (gauss_prime((2, 1)), qi_elem(1), qi_elem(Fraction(1, 2)), True),
            (complex_abs(), qi_elem(0, 1), qi_elem(Fraction(1, 2)), True),
        ]
        y = weak_approx(t)
        assert y == qi_elem(0, Fraction(8, 9))
        check_all(t, y)

    def test_random_instances(self):
        r = rng("weak-qi")
        places = [gauss_prime((1, 1)), gauss_prime((2, 1)), gauss_prime((3, 0)), complex_abs()]
        for _ in range(40):
            k = r.randint(2, 4)
            vs = r.sample(places, k)
            t = [
                (v, rand_elem(r, QI, h=8), rand_elem(r, QI, h=8, nonzero=True), bool(r.getrandbits(1)))
                for v in vs
            ]
            check_all(t, weak_approx(t))


T = QPoly((0, 1))


class TestRationalFunctions:
    def test_degree_place_correction(self):
        t = [
            (poly_adic(T), parse_element("1", QT), parse_element("T", QT), False),
            (degree_val(), parse_element("0", QT), parse_element("1/T", QT), False),
        ]
        assert weak_approx(t) == parse_element("1/(1-T)", QT)

    def test_congruences_only(self):
        t = [
            (poly_adic(T), parse_element("0", QT), parse_element("T^2", QT), False),
            (poly_adic(QPoly((-1, 1))), parse_element("1", QT), parse_element("T-1", QT), False),
        ]
        y = weak_approx(t)
        check_all(t, y)
        assert y == parse_element("T^2", QT)

    def test_order_targets_become_strict_hits(self):
        t = [
            (order_at(0, "+"), parse_element("0", QT), parse_element("T", QT), True),
            (order_at(1, "-"), parse_element("2", QT), parse_element("1", QT), False),
            (degree_val(), parse_element("0", QT), parse_element("1", QT), False),
        ]
        check_all(t, weak_approx(t))

    def test_composite_and_infinite_order(self):
        t = [
            (composite(0, p_adic(2)), parse_element("2", QT), parse_element("1", QT), True),
            (order_at_inf("+"), parse_element("T", QT), parse_element("T", QT), True),
        ]
        y = weak_approx(t)
        assert y == parse_element("T+2", QT)
        check_all(t, y)

    def test_random_instances(self):
        r = rng("weak-qt")
        places = [
            poly_adic(T),
            poly_adic(QPoly((-1, 1))),
            poly_adic(QPoly((1, 0, 1))),
            order_at(2, "+"),
            order_at_inf("-"),
            composite(3, p_adic(2)),
        ]
        for _ in range(25):
            k = r.randint(2, 4)
            vs = r.sample(places, k)
            t = [
                (v, rand_elem(r, QT, h=5), rand_elem(r, QT, h=5, nonzero=True), bool(r.getrandbits(1)))
                for v in vs
            ]
            check_all(t, weak_approx(t))


class TestPreconditions:
    def test_zero_modulus(self):
        with pytest.raises(ZeroModulus):
            weak_approx([(p_adic(2), q_elem(1), q_elem(0), False)])

    def test_trivial_locality(self):
        with pytest.raises(TrivialLocality):
            weak_approx([(trivial(Q), q_elem(1), q_elem(1), False)])

    def test_repeated_place(self):
        t = [
            (p_adic(2), q_elem(0), q_elem(2), False),
            (p_adic(2), q_elem(1), q_elem(2), False),
        ]
        with pytest.raises(DependentInputs):
            weak_approx(t)

    def test_dependent_pair(self):
        t = [
            (order_at(0, "+"), parse_element("0", QT), parse_element("1", QT), False),
            (composite(0, p_adic(2)), parse_element("0", QT), parse_element("1", QT), False),
        ]
        with pytest.raises(DependentInputs):
            weak_approx(t)

    def test_field_mismatch(self):
        t = [
            (p_adic(2), q_elem(0), q_elem(2), False),
            (complex_abs(), qi_elem(0), qi_elem(1), False),
        ]
        with pytest.raises(FieldMismatch):
            weak_approx(t)

    def test_empty(self):
        with pytest.raises(BadParams):
            weak_approx([])


class TestDifferential:
    def test_enumeration_agrees_on_solvability(self):
        # brute-force over small rationals; every instance the enumerator can
        # solve must also be solved by the constructive routine
        r = rng("weak-diff")
        places = [p_adic(2), p_adic(3), real_order()]
        cands = []
        for h in range(1, 40):
            for den in range(1, h + 1):
                for num in range(-h, h + 1):
                    f = Fraction(num, den)
                    if max(abs(f.numerator), f.denominator) == h:
                        cands.append(f)
        for _ in range(12):
            t = [
                (v, q_elem(Fraction(r.randint(-4, 4))), q_elem(Fraction(1, r.randint(1, 6))), False)
                for v in places
            ]
            found = next((c for c in cands if all(ok(v, q_elem(c), x, z, s) for v, x, z, s in t)), None)
            y = weak_approx(t)
            check_all(t, y)
            assert found is not None
