from fractions import Fraction

import pytest

from locapprox.certificates import explicit_cert, find_common_certificate
from locapprox.elements import Q, QT, parse_element, q_elem
from locapprox.errors import (
    BadParams,
    FloorViolation,
    IncompatibleModuli,
    NotLinkable,
    NotTIndependent,
    Unlinkable,
    ZeroModulus,
)
from locapprox.kpoly import parse_kpoly
from locapprox.linking import build_b, link_pair, link_star
from locapprox.localities import (
    composite,
    contains,
    in_max_ideal,
    order_at,
    order_at_inf,
    p_adic,
    poly_adic,
    real_order,
    trivial,
)
from locapprox.qpoly import QPoly

T = QPoly((0, 1))
TM1 = QPoly((-1, 1))


def qt(s):
    return parse_element(s, QT)


class TestLinkPair:
    def test_composite_pair(self):
        b = link_pair(composite(0, p_adic(2)), composite(0, p_adic(3)), qt("1"), qt("1"))
        assert b == qt("10/9")
        assert in_max_ideal(composite(0, p_adic(2)), b)
        assert in_max_ideal(composite(0, p_adic(3)), b.inv())

    def test_padic_against_real(self):
        b = link_pair(p_adic(2), real_order(), q_elem(1), q_elem(1))
        assert b == q_elem(4)

    def test_scaled_moduli(self):
        z1 = q_elem(Fraction(1, 6))
        z2 = q_elem(Fraction(5, 4))
        b = link_pair(p_adic(3), real_order(), z1, z2)
        assert in_max_ideal(p_adic(3), b / z1)
        assert in_max_ideal(real_order(), z2 / b)

    def test_comparable_mixed_keeps_finer_modulus(self):
        b = link_pair(composite(0, p_adic(2)), poly_adic(T), qt("T"), qt("T"), mode="mixed")
        assert b == qt("T")

    def test_comparable_strict_rejected(self):
        with pytest.raises(NotLinkable):
            link_pair(composite(0, p_adic(2)), poly_adic(T), qt("1"), qt("1"))

    def test_two_sides_of_one_order_rejected(self):
        with pytest.raises(NotLinkable):
            link_pair(order_at(0, "+"), order_at(0, "-"), qt("1"), qt("1"))

    def test_moduli_must_agree_at_the_join(self):
        with pytest.raises(IncompatibleModuli):
            link_pair(composite(0, p_adic(2)), composite(0, p_adic(3)), qt("1"), qt("T"))

    def test_trivial_rejected(self):
        with pytest.raises(NotLinkable):
            link_pair(trivial(Q), p_adic(2), q_elem(1), q_elem(1))

    def test_zero_modulus(self):
        with pytest.raises(ZeroModulus):
            link_pair(p_adic(2), p_adic(3), q_elem(0), q_elem(1))


class TestLinkStar:
    def test_variant_two_with_refining_satellite(self):
        z = link_star(
            poly_adic(T), [(composite(0, p_adic(2)), qt("1"))], qt("1"), variant=2
        )
        assert z == qt("10/3")
        assert in_max_ideal(composite(0, p_adic(2)), z)
        assert contains(poly_adic(T), z.inv())

    def test_variant_one_refusal_on_refining_satellite(self):
        with pytest.raises(Unlinkable):
            link_star(poly_adic(T), [(composite(0, p_adic(2)), qt("1"))], qt("1"), variant=1)

    def test_real_center_over_two_primes(self):
        z = link_star(real_order(), [(p_adic(2), q_elem(1)), (p_adic(3), q_elem(1))], q_elem(1))
        assert z == q_elem(Fraction(12, 5))
        assert in_max_ideal(real_order(), z.inv())

    def test_trivial_center_skips_largeness(self):
        z = link_star(
            trivial(Q),
            [(p_adic(2), q_elem(1)), (real_order(), q_elem(Fraction(1, 2)))],
            q_elem(1),
        )
        assert z == q_elem(Fraction(28, 243))
        assert in_max_ideal(p_adic(2), z)
        assert in_max_ideal(real_order(), z / q_elem(Fraction(1, 2)))

    def test_no_satellites(self):
        z = link_star(p_adic(5), [], q_elem(3))
        assert z == q_elem(Fraction(3, 5))
        assert in_max_ideal(p_adic(5), q_elem(3) / z)

    def test_dependent_satellites_resolve_through_residues(self):
        z = link_star(
            composite(0, p_adic(5)),
            [(composite(0, p_adic(2)), qt("1")), (order_at(0, "+"), qt("1"))],
            qt("1"),
        )
        assert z == qt("-16/45")

    def test_mixed_clusters(self):
        z = link_star(
            composite(0, p_adic(3)),
            [(composite(0, p_adic(2)), qt("1")), (poly_adic(TM1), qt("1"))],
            qt("1"),
        )
        assert z == qt("-10/3*T^2+10/3")
        assert in_max_ideal(composite(0, p_adic(2)), z)
        assert in_max_ideal(poly_adic(TM1), z)
        assert in_max_ideal(composite(0, p_adic(3)), z.inv())

    def test_infinite_center(self):
        z = link_star(order_at_inf("+"), [(poly_adic(T), qt("T"))], qt("1"))
        assert in_max_ideal(poly_adic(T), z / qt("T"))
        assert in_max_ideal(order_at_inf("+"), z.inv())

    def test_hypothesis_violation(self):
        with pytest.raises(Unlinkable):
            link_star(composite(0, p_adic(2)), [(composite(0, p_adic(3)), qt("T"))], qt("1"))

    def test_coarsening_satellite_rejected(self):
        with pytest.raises(Unlinkable):
            link_star(composite(0, p_adic(2)), [(poly_adic(T), qt("1"))], qt("1"), variant=2)

    def test_center_among_satellites_rejected(self):
        with pytest.raises(Unlinkable):
            link_star(p_adic(2), [(p_adic(2), q_elem(1))], q_elem(1))

    def test_bad_variant(self):
        with pytest.raises(BadParams):
            link_star(p_adic(2), [], q_elem(1), variant=3)


class TestBuildB:
    def setup_method(self):
        self.cert = explicit_cert(Q, parse_kpoly("X^2+3*X+1", Q), q_elem(1))

    def test_single_pair(self):
        b = build_b([p_adic(2)], [p_adic(3)], q_elem(1), q_elem(1), self.cert, "m")
        assert b == q_elem(Fraction(10, 9))

    def test_composite_pair_through_uniformizer_cert(self):
        cu = find_common_certificate([poly_adic(T)])
        b = build_b(
            [composite(0, p_adic(2))],
            [composite(0, p_adic(3))],
            qt("1"),
            qt("1"),
            cu,
            "m",
        )
        t = cu.t
        assert in_max_ideal(composite(0, p_adic(2)), b / t)
        assert in_max_ideal(composite(0, p_adic(3)), b.inv() / t)

    def test_multi_member_sides(self):
        b = build_b(
            [p_adic(2), p_adic(5)],
            [p_adic(3), real_order()],
            q_elem(1),
            q_elem(1),
            self.cert,
            "m",
        )
        for v in (p_adic(2), p_adic(5)):
            assert in_max_ideal(v, b)
        for v in (p_adic(3), real_order()):
            assert in_max_ideal(v, b.inv())

    def test_situation_o_gives_closed_memberships(self):
        b = build_b(
            [p_adic(2)], [real_order()], q_elem(2), q_elem(Fraction(1, 3)), self.cert, "o"
        )
        assert contains(p_adic(2), b / q_elem(2))
        assert contains(real_order(), b.inv() / q_elem(Fraction(1, 3)))

    def test_equal_sides_rejected(self):
        with pytest.raises(NotTIndependent):
            build_b([p_adic(2)], [p_adic(2)], q_elem(1), q_elem(1), self.cert, "m")

    def test_floor_violation(self):
        cu = find_common_certificate([poly_adic(T)])
        with pytest.raises(FloorViolation):
            build_b(
                [composite(0, p_adic(2))],
                [composite(0, p_adic(3))],
                qt("T"),
                qt("1"),
                cu,
                "m",
            )

    def test_empty_side(self):
        with pytest.raises(BadParams):
            build_b([], [p_adic(3)], q_elem(1), q_elem(1), self.cert, "m")
