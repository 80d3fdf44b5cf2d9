from fractions import Fraction

import pytest

from locapprox.certificates import mixed_cert, uniformizer_cert
from locapprox.elements import (
    Q,
    QI,
    QT,
    format_element,
    parse_element,
    q_elem,
    qi_elem,
)
from locapprox.errors import (
    BadParams,
    FieldMismatch,
    NotIndependent,
    PoleAtCenter,
    PreconditionFailed,
    TrivialLocality,
    WitnessInvalid,
    ZeroModulus,
)
from locapprox.localities import (
    complex_abs,
    contains,
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
from locapprox.ratmap import (
    MapBlock,
    RationalMap,
    continuity_radius,
    eval_map,
    freeze_component,
    map_descriptor,
    map_from_descriptor,
    rational_map_approx,
)
from locapprox.topology import (
    SBall,
    find_joint_floor,
    find_small_nonzero,
    sball_contains,
    sball_interior_witness,
    sample_small,
    topology_axiom_witness,
)

T = QPoly((0, 1))


def qt(s):
    return parse_element(s, QT)


S_Q = (p_adic(2), real_order())
S_T = (poly_adic(T), poly_adic(QPoly((-1, 1))))
S_I = (gauss_prime((1, 1)), complex_abs())


# -------------------------------------------------------------- joint floors


def test_joint_floor_two_primes_frozen():
    z = find_joint_floor([p_adic(2), p_adic(3)], [q_elem(4), q_elem(9)])
    assert format_element(z) == "16848"
    for v in (p_adic(2), p_adic(3)):
        assert contains(v, z / q_elem(4)) and contains(v, z / q_elem(9))


def test_joint_floor_unit_fast_path():
    assert find_joint_floor([p_adic(2)], [q_elem(1)]) == q_elem(1)


def test_joint_floor_mixed_archimedean_frozen():
    zs = [q_elem(Fraction(1, 3)), q_elem(8)]
    z = find_joint_floor([real_order(), p_adic(2)], zs)
    assert format_element(z) == "32/729"
    for v in (real_order(), p_adic(2)):
        assert all(contains(v, z / zi) for zi in zs)


def test_joint_floor_certified_path():
    cert = mixed_cert(Q, (2,), 1)
    zs = [q_elem(Fraction(1, 3)), q_elem(8)]
    z = find_joint_floor([real_order(), p_adic(2)], zs, cert)
    assert not z.is_zero()
    for v in (real_order(), p_adic(2)):
        assert all(contains(v, z / zi) for zi in zs)


def test_joint_floor_requires_some_integral_modulus():
    with pytest.raises(PreconditionFailed):
        find_joint_floor([p_adic(2)], [q_elem(Fraction(1, 2))])


def test_joint_floor_rejects_trivial_and_zero():
    with pytest.raises(TrivialLocality):
        find_joint_floor([trivial(Q)], [q_elem(1)])
    with pytest.raises(ZeroModulus):
        find_joint_floor([p_adic(2)], [q_elem(0)])


def test_small_nonzero_frozen():
    z = find_small_nonzero(list(S_Q))
    assert format_element(z) == "8/81"
    assert all(in_max_ideal(v, z) for v in S_Q)
    assert format_element(find_small_nonzero([poly_adic(T)])) == "T"
    z2 = find_small_nonzero([order_at(0, "+"), order_at(0, "-")])
    assert format_element(z2) == "T^3"
    assert all(in_max_ideal(v, z2) for v in (order_at(0, "+"), order_at(0, "-")))


def test_filter_base_property_sampled():
    z1 = find_small_nonzero(list(S_Q))
    z2 = z1 * z1 + z1 * z1 * z1
    z = find_joint_floor(list(S_Q), [z1, z2])
    for y in sample_small(list(S_Q), 60):
        w = z * y
        assert all(in_max_ideal(v, w / z1) and in_max_ideal(v, w / z2) for v in S_Q)


# ------------------------------------------------------------------- S-balls


def test_sball_membership_examples():
    b = SBall((p_adic(2), p_adic(3)), q_elem(0), q_elem(6))
    assert not sball_contains(b, q_elem(12))
    assert sball_contains(b, b.center)
    br = SBall((real_order(),), q_elem(1), q_elem(Fraction(1, 2)))
    assert sball_contains(br, q_elem(Fraction(5, 4)))


def test_sball_field_mismatch():
    b = SBall((p_adic(2),), q_elem(0), q_elem(2))
    with pytest.raises(FieldMismatch):
        sball_contains(b, qt("T"))


def test_sball_interior_witness_sampled():
    b = SBall((p_adic(2), real_order()), q_elem(1), q_elem(4))
    x = q_elem(Fraction(11, 3))
    assert sball_contains(b, x)
    zp = sball_interior_witness(b, x)
    for y in sample_small(list(b.S), 50):
        assert sball_contains(b, x + zp * y)


def test_sball_interior_witness_complex_member():
    b = SBall(S_I, qi_elem(0, 0), qi_elem(2, 0))
    x = qi_elem(Fraction(-2, 5), Fraction(2, 5))
    assert sball_contains(b, x)
    zp = sball_interior_witness(b, x)
    for y in sample_small(list(S_I), 40):
        assert sball_contains(b, x + zp * y)


def test_sball_interior_requires_membership():
    b = SBall((p_adic(2),), q_elem(0), q_elem(2))
    with pytest.raises(PreconditionFailed):
        sball_interior_witness(b, q_elem(1))


# ------------------------------------------------------------- axiom witnesses


def _axiom_inputs(S, field):
    z = find_small_nonzero(list(S))
    return z, sample_small(list(S), 40)


@pytest.mark.parametrize("S,field", [(S_Q, Q), (S_T, QT), (S_I, QI)])
def test_axiom_1_separation(S, field):
    x = find_small_nonzero(list(S)) + parse_element("1", field)
    y = topology_axiom_witness(S, 1, x=x)
    assert not all(in_max_ideal(v, x / y) for v in S)


@pytest.mark.parametrize("S,field", [(S_Q, Q), (S_T, QT), (S_I, QI)])
def test_axiom_2_addition(S, field):
    z, pool = _axiom_inputs(S, field)
    y = topology_axiom_witness(S, 2, z=z)
    for a in pool[:15]:
        for b in pool[:15]:
            s = (y * a + y * b) / z
            assert all(in_max_ideal(v, s) for v in S)


def test_axiom_2_certified_uniformizer_frozen():
    cert = uniformizer_cert(QT, qt("T"), 1)
    y = topology_axiom_witness((poly_adic(T),), 2, z=qt("T"), cert=cert)
    assert format_element(y) == "T^2"


@pytest.mark.parametrize("S,field", [(S_Q, Q), (S_T, QT), (S_I, QI)])
def test_axioms_3_and_4(S, field):
    z, pool = _axiom_inputs(S, field)
    y3 = topology_axiom_witness(S, 3, z=z)
    y4 = topology_axiom_witness(S, 4, z=z)
    for a in pool[:12]:
        assert all(in_max_ideal(v, -(y3 * a) / z) for v in S)
        for b in pool[:12]:
            assert all(in_max_ideal(v, (y4 * a) * (y4 * b) / z) for v in S)


@pytest.mark.parametrize("S,field", [(S_Q, Q), (S_T, QT), (S_I, QI)])
def test_axiom_5_scaling(S, field):
    z, pool = _axiom_inputs(S, field)
    x = parse_element("3", field) + z
    y = topology_axiom_witness(S, 5, x=x, z=z)
    for a in pool[:25]:
        assert all(in_max_ideal(v, (x * y * a) / z) for v in S)


@pytest.mark.parametrize("S,field", [(S_Q, Q), (S_T, QT), (S_I, QI)])
def test_axiom_6_inversion(S, field):
    z, pool = _axiom_inputs(S, field)
    y = topology_axiom_witness(S, 6, z=z)
    onef = parse_element("1", field)
    for a in pool[:25]:
        w = (onef + y * a).inv()
        assert all(in_max_ideal(v, (w - onef) / z) for v in S)


def test_axiom_2_order_at_inf_halves_the_scaler():
    # (T-1)/T sits near the boundary of the ideal at infinity; doubling it
    # escapes, so the additive witness must treat this member as an ordering
    S = (order_at_inf("+"),)
    z, a = qt("1/T"), qt("(T-1)/T")
    assert in_max_ideal(S[0], a)
    y = topology_axiom_witness(S, 2, z=z)
    assert in_max_ideal(S[0], (y * a + y * a) / z)


def test_axiom_input_validation():
    with pytest.raises(PreconditionFailed):
        topology_axiom_witness(S_Q, 1, x=q_elem(0))
    with pytest.raises(PreconditionFailed):
        topology_axiom_witness(S_Q, 6, z=q_elem(Fraction(1, 2)))
    with pytest.raises(BadParams):
        topology_axiom_witness(S_Q, 7, z=q_elem(1))


def test_sample_small_is_deterministic_and_small():
    a = sample_small(list(S_Q), 30)
    b = sample_small(list(S_Q), 30)
    assert a == b and len(a) == 30
    assert all(all(in_max_ideal(v, e) for v in S_Q) for e in a)


# -------------------------------------------------------------- rational maps


def test_map_validation():
    with pytest.raises(BadParams):
        RationalMap(Q, ("T",), ("T",))
    with pytest.raises(BadParams):
        RationalMap(Q, ("x1", "x1"), ("x1",))
    with pytest.raises(Exception):
        RationalMap(Q, ("x1",), ("x2",))


def test_map_eval_and_pole():
    g = RationalMap(QT, ("x1", "x2"), ("(x1^2+1)/x2",))
    pt = (qt("T"), qt("1+T"))
    assert format_element(eval_map(g, pt)[0]) == "(T^2+1)/(T+1)"
    with pytest.raises(PoleAtCenter):
        eval_map(g, (qt("T"), qt("0")))


def test_map_descriptor_roundtrip():
    g = RationalMap(Q, ("x1", "x2"), ("(x1^2+1)/x2", "x1+x2"))
    assert map_from_descriptor(map_descriptor(g), Q) == g


def test_freeze_component_degrees():
    g = RationalMap(QT, ("x1", "x2"), ("(x1^2+1)/x2",))
    pt = (qt("T"), qt("1+T"))
    n, d = freeze_component(g, 0, 0, pt)
    assert (n.degree, d.degree) == (2, 0)
    n, d = freeze_component(g, 0, 1, pt)
    assert (n.degree, d.degree) == (0, 1)


def test_radius_reciprocal_dyadic_frozen():
    g = RationalMap(Q, ("x1",), ("1/x1",))
    d = continuity_radius(p_adic(2), g, (q_elem(1),), q_elem(4))
    assert format_element(d) == "8"


def test_radius_identity_is_target():
    g = RationalMap(Q, ("x1",), ("x1",))
    assert continuity_radius(p_adic(2), g, (q_elem(7),), q_elem(4)) == q_elem(4)
    assert continuity_radius(real_order(), g, (q_elem(0),), q_elem(Fraction(1, 3))) == q_elem(Fraction(1, 3))


def test_radius_square_real_frozen():
    g = RationalMap(Q, ("x1",), ("x1^2",))
    d = continuity_radius(real_order(), g, (q_elem(2),), q_elem(Fraction(1, 2)))
    assert format_element(d) == "1/16"


def test_radius_certificate_property():
    # sampled h in the returned ball must keep the image difference inside
    g = RationalMap(Q, ("x1",), ("1/x1",))
    x0, target = q_elem(1), q_elem(4)
    v = p_adic(2)
    d = continuity_radius(v, g, (x0,), target)
    g0 = eval_map(g, (x0,))[0]
    for k in range(1, 30):
        h = d * q_elem(Fraction(2**k, 2 * k + 1))
        assert in_max_ideal(v, h / d)
        diff = eval_map(g, (x0 + h,))[0] - g0
        assert in_max_ideal(v, diff / target)


def test_radius_square_complex_frozen():
    g = RationalMap(QI, ("x1",), ("x1^2",))
    d = continuity_radius(complex_abs(), g, (qi_elem(0, 1),), qi_elem(Fraction(1, 2), 0))
    assert format_element(d) == "1/8"


def test_radius_multivariate_order_at():
    g = RationalMap(QT, ("x1", "x2"), ("(x1^2+1)/x2",))
    pt = (qt("T"), qt("1+T"))
    d = continuity_radius(order_at(0, "+"), g, pt, qt("1"))
    assert format_element(d) == "T"


def test_radius_order_at_inf_dispatch():
    g = RationalMap(QT, ("x1",), ("x1^2",))
    v = order_at_inf("+")
    d = continuity_radius(v, g, (qt("0"),), qt("1"))
    assert not d.is_zero()
    for j in (1, 2, 7):
        h = d * qt(f"({j}*T-1)/({j}*T)")
        assert in_max_ideal(v, h / d)
        assert in_max_ideal(v, eval_map(g, (h,))[0])


def test_radius_pole_at_center():
    g = RationalMap(Q, ("x1",), ("1/x1",))
    with pytest.raises(PoleAtCenter):
        continuity_radius(p_adic(2), g, (q_elem(0),), q_elem(4))


def test_map_approx_square_fixture_frozen():
    g = RationalMap(Q, ("x1",), ("x1^2",))
    blocks = [
        MapBlock((p_adic(2),), (q_elem(1),), (q_elem(8),)),
        MapBlock((real_order(),), (q_elem(4),), (q_elem(Fraction(1, 2)),)),
    ]
    wit = {p_adic(2): (q_elem(1),), real_order(): (q_elem(2),)}
    x = rational_map_approx(blocks, g, wit, mixed_cert(Q, (2,), 1))
    assert format_element(x[0]) == "161/81"
    gx = eval_map(g, x)[0]
    assert in_max_ideal(p_adic(2), (gx - q_elem(1)) / q_elem(8))
    assert in_max_ideal(real_order(), (gx - q_elem(4)) / q_elem(Fraction(1, 2)))


def test_map_approx_identity_reduces_to_weak():
    g = RationalMap(Q, ("x1",), ("x1",))
    blocks = [
        MapBlock((p_adic(3),), (q_elem(1),), (q_elem(9),)),
        MapBlock((real_order(),), (q_elem(0),), (q_elem(Fraction(1, 4)),)),
    ]
    wit = {p_adic(3): (q_elem(1),), real_order(): (q_elem(0),)}
    x = rational_map_approx(blocks, g, wit)
    assert in_max_ideal(p_adic(3), (x[0] - q_elem(1)) / q_elem(9))
    assert in_max_ideal(real_order(), x[0] / q_elem(Fraction(1, 4)))


def test_map_approx_rejects_bad_witness():
    g = RationalMap(Q, ("x1",), ("x1^2",))
    blocks = [MapBlock((p_adic(2),), (q_elem(1),), (q_elem(8),))]
    with pytest.raises(WitnessInvalid):
        rational_map_approx(blocks, g, {p_adic(2): (q_elem(2),)})


def test_map_approx_rejects_dependent_members():
    g = RationalMap(Q, ("x1",), ("x1",))
    blocks = [
        MapBlock((p_adic(2),), (q_elem(0),), (q_elem(2),)),
        MapBlock((p_adic(2),), (q_elem(0),), (q_elem(2),)),
    ]
    wit = {p_adic(2): (q_elem(0),)}
    with pytest.raises(NotIndependent):
        rational_map_approx(blocks, g, wit)


def test_map_approx_dimension_mismatch():
    g = RationalMap(Q, ("x1",), ("x1", "x1+1"))
    blocks = [MapBlock((p_adic(2),), (q_elem(0),), (q_elem(2),))]
    with pytest.raises(BadParams):
        rational_map_approx(blocks, g, {p_adic(2): (q_elem(0),)})
