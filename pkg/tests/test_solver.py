from fractions import Fraction

import pytest

from locapprox.certificates import explicit_cert, mixed_cert, uniformizer_cert
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
    CertificateInvalid,
    ExcludedConflict,
    Incompatible,
    IncompatibleInputs,
    TargetNotIntegral,
    TrivialLocality,
    ZeroModulus,
)
from locapprox.intmath import factorint
from locapprox.kpoly import parse_kpoly
from locapprox.localities import (
    complex_abs,
    composite,
    disc_val,
    gauss_prime,
    order_at_inf,
    p_adic,
    poly_adic,
    real_order,
    trivial,
)
from locapprox.qpoly import QPoly
from locapprox.solver import (
    ApproxProblem,
    Block,
    Constraint,
    block_approx,
    check_compat,
    finitary_approx,
    residue_approx,
    strong_approx_q,
    value_approx,
    verify_solution,
    weak_solve,
)

T = QPoly((0, 1))
TM1 = QPoly((-1, 1))
TM2 = QPoly((-2, 1))


def qt(s):
    return parse_element(s, QT)


CERT_Q2 = mixed_cert(Q, (2,), 1)
CERT_Q235 = mixed_cert(Q, (2, 3, 5), 1)
CERT_T = uniformizer_cert(QT, qt("T"), 1)
CERT_T23 = mixed_cert(QT, (2, 3), 1)
CERT_POLY = explicit_cert(Q, parse_kpoly("X^2+3*X+1", Q), q_elem(1))


def two_anchor_problem():
    return ApproxProblem(
        QT,
        "m",
        (
            Block((poly_adic(T),), qt("0"), qt("1")),
            Block((poly_adic(TM1),), qt("1"), qt("1")),
        ),
        CERT_T,
    )


def dyadic_real_problem():
    return ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((real_order(),), q_elem(10), q_elem(Fraction(1, 2))),
        ),
        CERT_Q2,
    )


def composite_pair_problem():
    return ApproxProblem(
        QT,
        "m",
        (
            Block((composite(0, p_adic(2)),), qt("0"), qt("1")),
            Block((composite(0, p_adic(3)),), qt("1"), qt("1")),
        ),
        CERT_T23,
    )


def mismatched_moduli_problem():
    # Two composite blocks whose moduli disagree at the shared (T)-adic
    # coarsening; unsolvable no matter the targets.
    return ApproxProblem(
        QT,
        "o",
        (
            Block((composite(0, p_adic(2)),), qt("1/(2*T)"), qt("1/T")),
            Block((composite(0, p_adic(3)),), qt("0"), qt("1")),
        ),
        CERT_T23,
    )


# ---------------------------------------------------------------- containers


def test_constraint_rejects_zero_modulus():
    with pytest.raises(ZeroModulus):
        Constraint(p_adic(2), q_elem(1), q_elem(0))


def test_block_rejects_trivial_member():
    with pytest.raises(TrivialLocality):
        Block((trivial(Q),), q_elem(0), q_elem(1))


def test_block_rejects_repeat_member():
    with pytest.raises(BadParams):
        Block((p_adic(2), p_adic(2)), q_elem(0), q_elem(1))


def test_problem_rejects_bad_situation():
    with pytest.raises(BadParams):
        ApproxProblem(Q, "x", (Block((p_adic(2),), q_elem(0), q_elem(1)),))


def test_problem_rejects_field_mix():
    with pytest.raises(BadParams):
        ApproxProblem(Q, "m", (Block((poly_adic(T),), qt("0"), qt("1")),))


# ------------------------------------------------------------- check_compat


def test_compat_flags_modulus_mismatch_with_witness():
    rep = check_compat(mismatched_moduli_problem())
    assert not rep.ok
    issue = rep.issues[0]
    assert issue.kind == "moduli"
    assert issue.witness is not None and issue.witness.kind == "poly-adic"
    assert "w(z_i) = -1 vs w(z_j) = 0" in issue.detail


def test_compat_accepts_composite_pair():
    assert check_compat(composite_pair_problem()).ok


def test_compat_rejects_repeat_locality_in_m():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((p_adic(2),), q_elem(0), q_elem(8)),
        ),
        CERT_Q2,
    )
    rep = check_compat(p)
    assert not rep.ok
    assert any(i.kind == "comparable" for i in rep.issues)


def test_compat_allows_consistent_repeat_in_o():
    p = ApproxProblem(
        Q,
        "o",
        (
            Block((p_adic(2),), q_elem(1), q_elem(8)),
            Block((p_adic(2),), q_elem(1), q_elem(8)),
        ),
        CERT_Q2,
    )
    assert check_compat(p).ok


def test_compat_flags_inconsistent_repeat_in_o():
    p = ApproxProblem(
        Q,
        "o",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((p_adic(2),), q_elem(1), q_elem(8)),
        ),
        CERT_Q2,
    )
    rep = check_compat(p)
    assert not rep.ok
    assert any(i.kind == "targets" for i in rep.issues)


def test_compat_requires_certificate_for_certified_blocks():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((real_order(),), q_elem(10), q_elem(Fraction(1, 2))),
        ),
        None,
    )
    rep = check_compat(p)
    assert any(i.kind == "certificate" for i in rep.issues)


def test_compat_flags_member_outside_certificate():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((p_adic(3),), q_elem(1), q_elem(9)),
        ),
        CERT_Q2,
    )
    rep = check_compat(p)
    assert any(i.kind == "certificate" for i in rep.issues)


# ----------------------------------------------------------- finitary_approx


def test_finitary_gaussian_exceptional_pair():
    # Open disc of radius 1/2 around i, plus strict (1+i)-adic integrality.
    cs = [
        Constraint(complex_abs(), qi_elem(0, 1), qi_elem(Fraction(1, 2), 0)),
        Constraint(gauss_prime((1, 1)), qi_elem(0, 0), qi_elem(1, 0)),
    ]
    sol = finitary_approx(cs, "m")
    assert sol.ok
    assert format_element(sol.x) == "4/3i"


def test_finitary_dependent_cluster_recurses_to_residue():
    cs = [
        Constraint(composite(0, p_adic(2)), qt("0"), qt("1")),
        Constraint(composite(0, p_adic(3)), qt("1"), qt("1")),
    ]
    sol = finitary_approx(cs, "m")
    assert sol.ok
    assert format_element(sol.x) == "4"


def test_finitary_rejects_unequal_targets_on_linked_pair():
    # (T)-adic and a composite refining it are not strongly incomparable, so
    # distinct targets cannot both be hit strictly.
    cs = [
        Constraint(poly_adic(T), qt("0"), qt("1")),
        Constraint(composite(0, p_adic(2)), qt("1"), qt("1")),
    ]
    with pytest.raises(IncompatibleInputs):
        finitary_approx(cs, "m")


def test_finitary_o_mode_keeps_finer_of_comparable_pair():
    cs = [
        Constraint(poly_adic(T), qt("T"), qt("T")),
        Constraint(composite(0, p_adic(2)), qt("T"), qt("T")),
    ]
    sol = finitary_approx(cs, "o")
    assert sol.ok


def test_finitary_linked_orderings_at_infinity_need_equal_targets():
    # both sides at infinity share the degree coarsening, so distinct targets
    # are refused even without strictness
    cs = [
        Constraint(order_at_inf("+"), qt("0"), qt("1")),
        Constraint(order_at_inf("-"), qt("1"), qt("1")),
    ]
    with pytest.raises(IncompatibleInputs):
        finitary_approx(cs, "o")


def test_finitary_weak_base_case():
    cs = [
        Constraint(p_adic(2), q_elem(1), q_elem(8)),
        Constraint(p_adic(3), q_elem(2), q_elem(9)),
        Constraint(real_order(), q_elem(Fraction(1, 2)), q_elem(Fraction(1, 10))),
    ]
    sol = finitary_approx(cs, "o")
    assert sol.ok
    assert format_element(sol.x) == "61/125"


def test_weak_solve_matches_finitary_on_independent_data():
    cs = [
        Constraint(p_adic(2), q_elem(1), q_elem(4)),
        Constraint(p_adic(5), q_elem(2), q_elem(5)),
    ]
    assert weak_solve(cs).ok


# ------------------------------------------------------------- block_approx


def test_block_two_anchors_frozen():
    sol = block_approx(two_anchor_problem())
    assert sol.ok
    assert format_element(sol.x) == (
        "(T^7-5/2*T^6+25/16*T^5)/(T^7-5/2*T^6+25/16*T^5"
        "-1/16*T^4+1/4*T^3-3/8*T^2+1/4*T-1/16)"
    )


def test_block_dyadic_real_frozen():
    sol = block_approx(dyadic_real_problem())
    assert sol.ok
    assert format_element(sol.x) == "3123000320/312301907"


def test_block_composite_pair_frozen():
    sol = block_approx(composite_pair_problem())
    assert sol.ok
    assert format_element(sol.x) == "512/2587733"


def test_block_three_anchors_verifies():
    p = ApproxProblem(
        QT,
        "m",
        (
            Block((poly_adic(T),), qt("0"), qt("1")),
            Block((poly_adic(TM1),), qt("1"), qt("1")),
            Block((poly_adic(TM2),), qt("2"), qt("1")),
        ),
        CERT_T,
    )
    sol = block_approx(p)
    assert sol.ok


def test_block_multi_member_blocks_verify():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2), p_adic(5)), q_elem(0), q_elem(8)),
            Block((p_adic(3), real_order()), q_elem(10), q_elem(Fraction(1, 2))),
        ),
        CERT_Q235,
    )
    sol = block_approx(p)
    assert sol.ok
    assert all(e.ok for e in sol.ledger)


def test_block_o_mode_deduplicates_repeats():
    p = ApproxProblem(
        Q,
        "o",
        (
            Block((p_adic(2),), q_elem(1), q_elem(8)),
            Block((real_order(),), q_elem(10), q_elem(Fraction(1, 2))),
            Block((p_adic(2),), q_elem(1), q_elem(8)),
        ),
        CERT_Q2,
    )
    sol = block_approx(p)
    assert sol.ok
    assert format_element(sol.x) == "911790755/91179683"


def test_block_rejects_inconsistent_repeats_in_m():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((p_adic(2),), q_elem(0), q_elem(8)),
        ),
        CERT_Q2,
    )
    with pytest.raises(Incompatible):
        block_approx(p)


def test_block_exceptional_member_joins_certified_core():
    # mixed({2}, 1) is fully valid at 2 and the ordering, and drops only the
    # image condition at 7, so the 7-adic block rides along as exceptional.
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8)),
            Block((real_order(),), q_elem(10), q_elem(Fraction(1, 2))),
            Block((p_adic(7),), q_elem(1), q_elem(7), exceptional=True),
        ),
        CERT_Q2,
    )
    sol = block_approx(p)
    assert sol.ok
    assert len(sol.ledger) == 3 and all(e.ok for e in sol.ledger)


def test_block_all_exceptional_falls_back_to_finitary():
    p = ApproxProblem(
        Q,
        "m",
        (
            Block((p_adic(2),), q_elem(0), q_elem(8), exceptional=True),
            Block((p_adic(7),), q_elem(1), q_elem(7), exceptional=True),
        ),
        None,
    )
    sol = block_approx(p)
    assert sol.ok
    assert format_element(sol.x) == "736"


def test_block_o_mode_drops_covered_exceptional():
    p = ApproxProblem(
        Q,
        "o",
        (
            Block((p_adic(2),), q_elem(1), q_elem(8)),
            Block((real_order(),), q_elem(10), q_elem(Fraction(1, 2))),
            Block((p_adic(2),), q_elem(1), q_elem(8), exceptional=True),
        ),
        CERT_Q2,
    )
    sol = block_approx(p)
    assert sol.ok


def test_block_rejects_mismatched_moduli():
    with pytest.raises(Incompatible):
        block_approx(mismatched_moduli_problem())


def test_block_deterministic():
    a = block_approx(dyadic_real_problem())
    b = block_approx(dyadic_real_problem())
    assert a.x == b.x


# -------------------------------------------------------------- corollaries


def test_value_approx_frozen_and_audited():
    z = value_approx(
        [((p_adic(2),), q_elem(4)), ((p_adic(3),), q_elem(Fraction(1, 3)))],
        CERT_POLY,
    )
    assert format_element(z) == "131092/69843"
    assert disc_val(p_adic(2), z) == 2
    assert disc_val(p_adic(3), z) == -1


def test_value_approx_rejects_ordering_member():
    with pytest.raises(BadParams):
        value_approx([((real_order(),), q_elem(2))], CERT_POLY)


def test_residue_approx_frozen():
    x = residue_approx(
        [((p_adic(2),), q_elem(0)), ((p_adic(3),), q_elem(1))],
        CERT_POLY,
    )
    assert format_element(x) == "170/89"
    assert disc_val(p_adic(2), x) >= 1
    assert disc_val(p_adic(3), x - q_elem(1)) >= 1


def test_residue_approx_rejects_nonintegral_target():
    with pytest.raises(TargetNotIntegral):
        residue_approx([((p_adic(2),), q_elem(Fraction(1, 2)))], CERT_POLY)


def test_strong_approx_frozen_excluded_five():
    cs = [
        Constraint(p_adic(2), q_elem(1), q_elem(8), strict=False),
        Constraint(p_adic(3), q_elem(2), q_elem(9), strict=False),
        Constraint(real_order(), q_elem(Fraction(1, 2)), q_elem(Fraction(1, 10)), strict=False),
    ]
    x = strong_approx_q(cs, p_adic(5))
    assert format_element(x) == "61/125"
    assert set(factorint(x.a.denominator)) <= {5}


def test_strong_approx_excluded_real():
    cs = [Constraint(p_adic(2), q_elem(1), q_elem(2), strict=False)]
    x = strong_approx_q(cs, real_order())
    assert format_element(x) == "1"
    assert x.a.denominator == 1


def test_strong_approx_rejects_constrained_excluded_place():
    cs = [Constraint(p_adic(5), q_elem(1), q_elem(5), strict=False)]
    with pytest.raises(ExcludedConflict):
        strong_approx_q(cs, p_adic(5))


def test_strong_approx_rejects_bad_excluded_kind():
    with pytest.raises(BadParams):
        strong_approx_q([], poly_adic(T))


# ------------------------------------------------------------- equivariance


def test_solution_shift_equivariance():
    p = dyadic_real_problem()
    x = block_approx(p).x
    c = q_elem(Fraction(7, 3))
    shifted = ApproxProblem(
        Q,
        "m",
        tuple(Block(b.S, b.x + c, b.z, b.exceptional) for b in p.blocks),
        p.cert,
    )
    assert all(e.ok for e in verify_solution(shifted, x + c))


def test_solution_scale_equivariance():
    p = dyadic_real_problem()
    x = block_approx(p).x
    c = q_elem(Fraction(3, 5))
    scaled = ApproxProblem(
        Q,
        "m",
        tuple(Block(b.S, b.x * c, b.z * c, b.exceptional) for b in p.blocks),
        p.cert,
    )
    assert all(e.ok for e in verify_solution(scaled, x * c))
