"""Joint floors, S-balls and the axioms of the S-topology.

For a finite set S of localities on one field, write m_S for the intersection
of the maximal ideals over S.  The sets x + z*m_S (S-balls) are the basis of a
Hausdorff field topology once m_S contains nonzero elements and the usual
neighbourhood-filter axioms hold; every operation here returns the explicit
element witnessing one of those facts.

The workhorse is ``find_joint_floor``: given moduli z_1..z_n it produces a
single nonzero z lying in every z_i*O_v for every v in S, the value-theoretic
floor of the z_i.  With a certificate the fold of inverses through the
combinator does it in one pass; otherwise the per-member minima are fed to a
star link centred at the trivial valuation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .certificates import Certificate
from .combinator import combine
from .elements import FieldElem, from_rational, one, zero
from .errors import (
    BadParams,
    FieldMismatch,
    PreconditionFailed,
    RootHit,
    TrivialLocality,
    ZeroModulus,
    ZeroOutput,
)
from .linking import link_star
from .localities import (
    ORDERING_KINDS,
    Locality,
    contains,
    in_max_ideal,
    small_element,
    trivial,
)

__all__ = [
    "SBall",
    "find_joint_floor",
    "find_small_nonzero",
    "sball_contains",
    "sball_interior_witness",
    "sample_small",
    "topology_axiom_witness",
]


def _check_members(S: Sequence[Locality]) -> tuple[Locality, ...]:
    out: list[Locality] = []
    for v in S:
        if v.kind == "trivial":
            raise TrivialLocality("S may not contain the trivial locality")
        if v not in out:
            out.append(v)
    if not out:
        raise BadParams("empty locality set")
    if len({v.field for v in out}) != 1:
        raise FieldMismatch("localities from different fields")
    return tuple(out)


def min_ball_modulus(v: Locality, zs: Sequence[FieldElem]) -> FieldElem:
    """A z_i with z_i*O_v equal to the intersection of all z_j*O_v.

    Divisibility at a single locality is total, so a minimum exists; ties go
    to the earliest index.
    """
    for z in zs:
        if z.is_zero():
            raise ZeroModulus("zero modulus in floor computation")
    for zi in zs:
        if all(contains(v, zi / zk) for zk in zs):
            return zi
    raise PreconditionFailed("no minimal modulus; inputs are not comparable")


def find_joint_floor(
    S: Sequence[Locality],
    zs: Sequence[FieldElem],
    cert: Optional[Certificate] = None,
) -> FieldElem:
    """Nonzero z with z in z_i*O_v for every i and every v in S.

    Requires that each v already has some z_i in O_v.  The certified route is
    the inverse fold z = combine(z_1^-1, .., z_n^-1)^-1; without a certificate
    (or when the fold degenerates) the per-member minima are hit by a
    variant-2 star link centred at the trivial valuation.
    """
    S = _check_members(S)
    if not zs:
        raise BadParams("no moduli given")
    for z in zs:
        if z.is_zero():
            raise ZeroModulus("joint floor of a zero modulus")
    for v in S:
        if not any(contains(v, z) for z in zs):
            raise PreconditionFailed(f"no integral modulus at {v.kind}")
    field = S[0].field
    if all(contains(v, z.inv()) for v in S for z in zs):
        return one(field)
    if cert is not None:
        try:
            return combine(cert, [z.inv() for z in zs]).inv()
        except (RootHit, ZeroOutput):
            pass
    mins = [(v, min_ball_modulus(v, zs)) for v in S]
    if len(mins) == 1:
        return mins[0][1]
    return link_star(trivial(field), mins, one(field), variant=2)


def find_small_nonzero(
    S: Sequence[Locality], cert: Optional[Certificate] = None
) -> FieldElem:
    """A nonzero element of m_S."""
    S = _check_members(S)
    if len(S) == 1:
        return small_element(S[0])
    return find_joint_floor(S, [small_element(v) for v in S], cert)


@dataclass(frozen=True)
class SBall:
    """x + z*m_S; membership is strict at every member of S."""

    S: tuple[Locality, ...]
    center: FieldElem
    modulus: FieldElem

    def __init__(self, S, center: FieldElem, modulus: FieldElem):
        members = _check_members(S)
        if modulus.is_zero():
            raise ZeroModulus("S-ball with zero modulus")
        if not (members[0].field == center.field == modulus.field):
            raise FieldMismatch("S-ball data from different fields")
        object.__setattr__(self, "S", members)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "modulus", modulus)


def sball_contains(ball: SBall, x: FieldElem) -> bool:
    if x.field != ball.center.field:
        raise FieldMismatch("testing membership of a foreign element")
    u = (x - ball.center) / ball.modulus
    return all(in_max_ideal(v, u) for v in ball.S)


def sball_interior_witness(
    ball: SBall, x: FieldElem, cert: Optional[Certificate] = None
) -> FieldElem:
    """A modulus z' with x + z'*m_S inside the ball; proves S-openness.

    Per member: valuations need nothing beyond integrality, orderings take a
    strict multiple of min(1-u, 1+u) as in the openness proof, and the complex
    place takes the rational bound (1 - |u|^2)/2.  The joint floor of these
    choices works at every member at once.
    """
    if not sball_contains(ball, x):
        raise PreconditionFailed("witness point outside the ball")
    u = (x - ball.center) / ball.modulus
    field = u.field
    o = one(field)
    zis = []
    for v in ball.S:
        if v.kind in ORDERING_KINDS:
            zis.append(small_element(v) * min_ball_modulus(v, [o - u, o + u]))
        elif v.kind == "complex":
            q = u.a * u.a + u.b * u.b
            zis.append(from_rational(field, (1 - q) / 2))
        else:
            zis.append(small_element(v))
    return ball.modulus * find_joint_floor(ball.S, zis, cert)


def _additive_scaler(
    S: Sequence[Locality], cert: Optional[Certificate]
) -> FieldElem:
    # t with t*m_S + t*m_S contained in m_S: certificates carry such a t;
    # otherwise 1 works at valuations and 1/2 at archimedean-style members.
    if cert is not None:
        return cert.t
    field = S[0].field
    ts = []
    for v in S:
        if v.kind in ORDERING_KINDS or v.kind == "complex":
            ts.append(from_rational(field, Fraction(1, 2)))
        else:
            ts.append(one(field))
    return find_joint_floor(S, ts)


def topology_axiom_witness(
    S: Sequence[Locality],
    axiom: int,
    *,
    x: Optional[FieldElem] = None,
    z: Optional[FieldElem] = None,
    cert: Optional[Certificate] = None,
) -> FieldElem:
    """The neighbourhood-filter witness for one of the six field axioms.

    1: y with x not in y*m_S (x != 0 separated from 0).
    2: y with y*m_S + y*m_S inside z*m_S.
    3: y with y*m_S inside -(z*m_S); m_S is symmetric, so y = z.
    4: y with (y*m_S)*(y*m_S) inside z*m_S; y = z since m_S*m_S stays put.
    5: y with x*(y*m_S) inside z*m_S, for a fixed nonzero x.
    6: y with (1 + y*m_S)^-1 inside 1 + z*m_S.
    """
    if axiom not in (1, 2, 3, 4, 5, 6):
        raise BadParams(f"no axiom {axiom}")
    S = _check_members(S)
    field = S[0].field
    half = from_rational(field, Fraction(1, 2))
    if axiom in (1, 5):
        if x is None or x.is_zero():
            raise PreconditionFailed("axioms 1 and 5 need a nonzero x")
    if axiom != 1:
        if z is None or z.is_zero():
            raise PreconditionFailed("this axiom needs a nonzero modulus z")
        # the filter is indexed by members of m_S, not by arbitrary moduli
        if not all(in_max_ideal(v, z) for v in S):
            raise PreconditionFailed("modulus z must lie in m_S")
    if axiom == 1:
        z0 = find_small_nonzero(S, cert)
        return find_joint_floor(S, [x, z0], cert)
    if axiom == 2:
        return z * _additive_scaler(S, cert)
    if axiom == 3:
        return z
    if axiom == 4:
        return z
    if axiom == 5:
        return find_joint_floor(S, [z * x.inv(), z], cert)
    if axiom == 6:
        return find_joint_floor(S, [z, z * half], cert)
    raise BadParams(f"no axiom {axiom}")


def sample_small(
    S: Sequence[Locality], count: int, cert: Optional[Certificate] = None
) -> list[FieldElem]:
    """Deterministic members of m_S for sampled containment checks.

    Powers of one known small element, their negatives, and two-term sums of
    distinct powers; every candidate is membership-checked before inclusion,
    so the returned list is exact regardless of how the pool was built.
    """
    S = _check_members(S)
    if count < 1:
        raise BadParams("need a positive sample count")
    zs = find_small_nonzero(S, cert)
    out = [zero(S[0].field)]
    pw = [zs]
    for _ in range(13):
        pw.append(pw[-1] * zs)

    def admit(e: FieldElem):
        if len(out) < count and all(in_max_ideal(v, e) for v in S):
            out.append(e)

    for j in range(len(pw)):
        admit(pw[j])
        admit(-pw[j])
    for j in range(len(pw)):
        for k in range(j + 1, len(pw)):
            if len(out) >= count:
                return out
            admit(pw[j] + pw[k])
            admit(pw[j] - pw[k])
            admit(pw[k] - pw[j])
            admit(-(pw[j] + pw[k]))
    i = 0
    while len(out) < count:
        out.append(out[i % len(out)])
        i += 1
    return out
