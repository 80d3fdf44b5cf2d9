"""Rational maps, certified continuity radii, and value approximation.

A rational map is a tuple of componentwise rational expressions in variables
x1..xl over one of the base fields.  Components are kept as expression
strings; evaluation re-runs the shared Pratt parser with operands drawn from
whatever algebra the caller needs: field elements for point evaluation, or
univariate polynomial fraction pairs when all but one variable is frozen.

``continuity_radius`` turns the usual epsilon-delta argument into an element:
given a locality v, a one-component map g, a point x0 and a target modulus z,
it returns delta != 0 such that x0 + h stays in the domain and
g(x0 + h) - g(x0) lands in z*m_v whenever h is in delta*m_v.  Valuations get
an exact threshold read off coefficient valuations of the shifted numerator
and denominator; orderings and the complex place run a shrinking loop whose
acceptance test is an exact interval bound, so a returned delta is a proof.

``rational_map_approx`` composes the pieces: check the per-locality witnesses,
shrink each target ball to a margin ball around the witness value, convert
margins to coordinate radii, and solve the resulting coordinate approximation
problems by weak approximation.  The final point is verified by direct
evaluation before being returned; if verification fails the radii are shrunk
and the coordinate problems re-solved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Optional, Sequence

from .certificates import Certificate, verify_certificate
from .elements import FieldElem, Q, QI, QT, from_rational, gen, one, zero
from .errors import (
    BadParams,
    CertificateInvalid,
    FieldMismatch,
    NotIndependent,
    ParseError,
    PoleAtCenter,
    PreconditionFailed,
    SolverFailed,
    WitnessInvalid,
    ZeroModulus,
)
from .kpoly import KPoly
from .localities import (
    Locality,
    contains,
    disc_val,
    in_max_ideal,
    independent,
    small_element,
)
from .parsing import parse_expression
from .topology import ORDERING_KINDS, min_ball_modulus
from .weak import weak_approx

__all__ = [
    "MapBlock",
    "RationalMap",
    "continuity_radius",
    "eval_map",
    "freeze_component",
    "map_descriptor",
    "map_from_descriptor",
    "rational_map_approx",
]

RANK_ONE_VALS = ("p-adic", "gaussian-prime", "poly-adic", "degree")
_RESERVED = {"i", "T", "X"}


class _PairOps:
    """Fraction pairs (num, den) over a ring; division never reduces."""

    def __init__(self, ring_one, from_int):
        self.ring_one = ring_one
        self._from_int = from_int

    def from_int(self, n):
        return (self._from_int(n), self.ring_one)

    @staticmethod
    def add(x, y):
        return (x[0] * y[1] + y[0] * x[1], x[1] * y[1])

    @staticmethod
    def sub(x, y):
        return (x[0] * y[1] - y[0] * x[1], x[1] * y[1])

    @staticmethod
    def mul(x, y):
        return (x[0] * y[0], x[1] * y[1])

    @staticmethod
    def div(x, y):
        return (x[0] * y[1], x[1] * y[0])

    @staticmethod
    def neg(x):
        return (-x[0], x[1])

    def pow_int(self, x, n):
        return (x[0] ** n, x[1] ** n)


@dataclass(frozen=True)
class RationalMap:
    """Components as expression strings in vars x1..xl over one field."""

    field: str
    vars: tuple[str, ...]
    comps: tuple[str, ...]

    def __init__(self, field: str, vars: Sequence[str], comps: Sequence[str]):
        vars = tuple(vars)
        comps = tuple(comps)
        if not vars or len(set(vars)) != len(vars):
            raise BadParams("variables must be nonempty and distinct")
        for name in vars:
            if name in _RESERVED or not name.isidentifier():
                raise BadParams(f"bad variable name {name!r}")
        if not comps:
            raise BadParams("a map needs at least one component")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "comps", comps)
        probe = {name: (one(field), one(field)) for name in vars}
        for comp in comps:
            _eval_pair(comp, field, probe)

    @property
    def arity(self) -> int:
        return len(self.vars)

    @property
    def dim(self) -> int:
        return len(self.comps)


def _gen_names(field: str, const):
    names = {}
    if field == QI:
        names["i"] = const(gen(QI))
    elif field == QT:
        names["T"] = const(gen(QT))
    return names


def _eval_pair(comp: str, field: str, env: Mapping[str, tuple]) -> tuple:
    ops = _PairOps(one(field), lambda n: from_rational(field, n))
    names = dict(env)
    names.update(_gen_names(field, lambda c: (c, one(field))))
    return parse_expression(comp, ops, names)


def eval_map(g: RationalMap, point: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    """Exact evaluation; PoleAtCenter when any denominator vanishes."""
    if len(point) != g.arity:
        raise BadParams("point arity mismatch")
    for p in point:
        if p.field != g.field:
            raise FieldMismatch("point from the wrong field")
    env = {name: (p, one(g.field)) for name, p in zip(g.vars, point)}
    out = []
    for comp in g.comps:
        num, den = _eval_pair(comp, g.field, env)
        if den.is_zero():
            raise PoleAtCenter(f"denominator of {comp!r} vanishes at the point")
        out.append(num / den)
    return tuple(out)


def freeze_component(
    g: RationalMap, comp_index: int, var_index: int, point: Sequence[FieldElem]
) -> tuple[KPoly, KPoly]:
    """Component as a univariate numerator/denominator pair in vars[var_index],
    all other variables pinned at the given point."""
    field = g.field
    x = KPoly.var(field)
    kone = KPoly.const(one(field))
    env = {}
    for k, name in enumerate(g.vars):
        if k == var_index:
            env[name] = (x, kone)
        else:
            env[name] = (KPoly.const(point[k]), kone)
    ops = _PairOps(kone, lambda n: KPoly.const(from_rational(field, n)))
    names = dict(env)
    names.update(_gen_names(field, lambda c: KPoly.const(c)))
    num, den = parse_expression(g.comps[comp_index], ops, names)
    if den.is_zero():
        raise PoleAtCenter("component denominator is the zero polynomial")
    return num, den


def map_descriptor(g: RationalMap) -> dict:
    return {"vars": list(g.vars), "components": list(g.comps)}


def map_from_descriptor(d: Mapping, field: str) -> RationalMap:
    try:
        return RationalMap(field, tuple(d["vars"]), tuple(d["components"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad rational map descriptor: {exc}") from exc


# -- certified radii ---------------------------------------------------------


def _positive(v: Locality, x: FieldElem) -> bool:
    # x > 0 at an ordering iff x sits strictly closer to 1 than to -1
    if x.is_zero():
        return False
    num = x - one(x.field)
    den = x + one(x.field)
    if den.is_zero():
        return False
    if num.is_zero():
        return True
    return in_max_ideal(v, num / den)


def _ord_abs(v: Locality, x: FieldElem) -> FieldElem:
    if x.is_zero() or _positive(v, x):
        return x
    return -x


def _norm_q(x: FieldElem) -> Fraction:
    return x.a * x.a + x.b * x.b


def _sqrt_ub(q: Fraction) -> Fraction:
    return Fraction(isqrt(q.numerator * q.denominator) + 1, q.denominator)


def _sqrt_lb(q: Fraction) -> Fraction:
    return Fraction(isqrt(q.numerator * q.denominator), q.denominator)


def _shifted_difference(
    num: KPoly, den: KPoly, x0: FieldElem
) -> tuple[KPoly, KPoly, FieldElem]:
    """(A, Dh, d0) with g(x0+h) - g(x0) = A(h) / (Dh(h) * d0)."""
    nh = num.shift(x0)
    dh = den.shift(x0)
    d0 = dh.coeff(0)
    if d0.is_zero():
        raise PoleAtCenter("denominator vanishes at the centre")
    a = nh * KPoly.const(d0) - KPoly.const(nh.coeff(0)) * dh
    return a, dh, d0


def _val_radius(v: Locality, a: KPoly, dh: KPoly, d0: FieldElem, target: FieldElem) -> FieldElem:
    tv = disc_val(v, target)
    d0v = disc_val(v, d0)
    m = 1
    for k in range(1, a.degree + 1):
        ak = a.coeff(k)
        if not ak.is_zero():
            need = tv + 2 * d0v - disc_val(v, ak)
            m = max(m, need // k + 1)
    for k in range(1, dh.degree + 1):
        dk = dh.coeff(k)
        if not dk.is_zero():
            need = d0v - disc_val(v, dk)
            m = max(m, need // k + 1)
    return small_element(v) ** m


def _ord_radius(v: Locality, a: KPoly, dh: KPoly, d0: FieldElem, target: FieldElem) -> FieldElem:
    field = target.field
    t_abs = _ord_abs(v, target)
    d0_abs = _ord_abs(v, d0)
    delta = one(field)
    shrink = small_element(v)
    for _ in range(80):
        num_b = zero(field)
        for k in range(1, a.degree + 1):
            num_b = num_b + _ord_abs(v, a.coeff(k)) * delta**k
        den_b = d0_abs
        for k in range(1, dh.degree + 1):
            den_b = den_b - _ord_abs(v, dh.coeff(k)) * delta**k
        if _positive(v, den_b) and _positive(v, t_abs * den_b * d0_abs - num_b):
            return delta
        delta = delta * shrink
    raise SolverFailed("interval bound never certified; target too tight")


def _complex_radius(a: KPoly, dh: KPoly, d0: FieldElem, target: FieldElem) -> FieldElem:
    t_lb = _sqrt_lb(_norm_q(target))
    d0_lb = _sqrt_lb(_norm_q(d0))
    delta = Fraction(1)
    for _ in range(200):
        num_b = Fraction(0)
        for k in range(1, a.degree + 1):
            ak = a.coeff(k)
            if not ak.is_zero():
                num_b += _sqrt_ub(_norm_q(ak)) * delta**k
        den_b = d0_lb
        for k in range(1, dh.degree + 1):
            dk = dh.coeff(k)
            if not dk.is_zero():
                den_b -= _sqrt_ub(_norm_q(dk)) * delta**k
        if den_b > 0 and num_b < t_lb * den_b * d0_lb:
            return from_rational(target.field, delta)
        delta /= 2
    raise SolverFailed("complex interval bound never certified")


def _uni_radius(v: Locality, num: KPoly, den: KPoly, x0: FieldElem, target: FieldElem) -> FieldElem:
    if target.is_zero():
        raise ZeroModulus("zero target modulus")
    a, dh, d0 = _shifted_difference(num, den, x0)
    if a.is_zero():
        return target
    # linear numerator over a constant denominator inverts exactly
    if a.degree == 1 and dh.degree == 0:
        return target * d0 * d0 / a.coeff(1)
    if v.kind in RANK_ONE_VALS:
        return _val_radius(v, a, dh, d0, target)
    if v.kind in ORDERING_KINDS:
        return _ord_radius(v, a, dh, d0, target)
    if v.kind == "complex":
        return _complex_radius(a, dh, d0, target)
    raise BadParams(f"no radius computation for kind {v.kind!r}")


def continuity_radius(
    v: Locality,
    g: RationalMap,
    x0: Sequence[FieldElem],
    target_modulus: FieldElem,
) -> FieldElem:
    """delta != 0 with g(x0 + h) - g(x0) in target*m_v for all h in delta*m_v.

    One-component maps only.  Multivariate maps are handled coordinate-wise:
    the radius in each variable is computed with the others frozen at x0 and
    the per-coordinate target shrunk to an equal share, then the coordinate
    radii are merged into their minimal ball at v.
    """
    if g.dim != 1:
        raise BadParams("continuity_radius expects a one-component map")
    eval_map(g, x0)  # domain check at the centre
    share = target_modulus
    if g.arity > 1 and v.kind not in RANK_ONE_VALS:
        share = target_modulus / from_rational(target_modulus.field, g.arity)
    radii = []
    for k in range(g.arity):
        num, den = freeze_component(g, 0, k, x0)
        radii.append(_uni_radius(v, num, den, x0[k], share))
    return min_ball_modulus(v, radii)


# -- corollary: rational maps hit prescribed balls ---------------------------


@dataclass(frozen=True)
class MapBlock:
    """One S-ball target per component, shared by every member of S."""

    S: tuple[Locality, ...]
    targets: tuple[FieldElem, ...]
    moduli: tuple[FieldElem, ...]

    def __init__(self, S, targets, moduli):
        S = tuple(S)
        targets = tuple(targets)
        moduli = tuple(moduli)
        if not S:
            raise BadParams("empty block")
        if len(targets) != len(moduli) or not targets:
            raise BadParams("targets and moduli must pair up")
        for z in moduli:
            if z.is_zero():
                raise ZeroModulus("zero modulus in map block")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "moduli", moduli)


def _margin(v: Locality, gx: FieldElem, y: FieldElem, z: FieldElem) -> FieldElem:
    # largest convenient ball around gx inside y + z*m_v
    u = (gx - y) / z
    if v.kind in ORDERING_KINDS:
        field = z.field
        half = from_rational(field, Fraction(1, 2))
        return z * (one(field) - _ord_abs(v, u)) * half
    if v.kind == "complex":
        q = _norm_q(u)
        return z * from_rational(z.field, (1 - q) / 2)
    return z


def rational_map_approx(
    blocks: Sequence[MapBlock],
    g: RationalMap,
    witnesses: Mapping[Locality, Sequence[FieldElem]],
    cert: Optional[Certificate] = None,
) -> tuple[FieldElem, ...]:
    """A point x with g(x) inside every block's ball at every member.

    Requires a witness point per locality whose image already sits in that
    locality's ball (checked; WitnessInvalid otherwise) and pairwise
    independence of all members across blocks.
    """
    if not blocks:
        raise BadParams("no blocks")
    members: list[tuple[Locality, MapBlock]] = []
    for b in blocks:
        if len(b.targets) != g.dim:
            raise BadParams("block dimension does not match the map")
        for v in b.S:
            if v.kind == "trivial":
                raise BadParams("trivial locality in a block")
            members.append((v, b))
    for i, (vi, _) in enumerate(members):
        for vj, _ in members[i + 1 :]:
            if not independent(vi, vj):
                raise NotIndependent(f"{vi.kind} and {vj.kind} are dependent")
    if cert is not None:
        rep = verify_certificate(cert, [v for v, _ in members])
        if not rep.ok:
            raise CertificateInvalid("certificate fails on the block union")

    radii: list[tuple[Locality, list[FieldElem]]] = []
    for v, b in members:
        try:
            xw = tuple(witnesses[v])
        except KeyError:
            raise BadParams(f"missing witness for {v.kind}") from None
        if len(xw) != g.arity:
            raise BadParams("witness arity mismatch")
        gx = eval_map(g, xw)
        per_coord: list[FieldElem] = []
        comp_margins = []
        for j in range(g.dim):
            u = (gx[j] - b.targets[j]) / b.moduli[j]
            if not in_max_ideal(v, u):
                raise WitnessInvalid(
                    f"witness image misses component {j} ball at {v.kind}"
                )
            comp_margins.append(_margin(v, gx[j], b.targets[j], b.moduli[j]))
        for k in range(g.arity):
            deltas = []
            for j in range(g.dim):
                num, den = freeze_component(g, j, k, xw)
                share = comp_margins[j]
                if g.arity > 1 and v.kind not in RANK_ONE_VALS:
                    share = share / from_rational(share.field, g.arity)
                deltas.append(_uni_radius(v, num, den, xw[k], share))
            per_coord.append(min_ball_modulus(v, deltas))
        radii.append((v, per_coord))

    for _ in range(8):
        coords = []
        for k in range(g.arity):
            data = [
                (v, tuple(witnesses[v])[k], per[k], True) for v, per in radii
            ]
            coords.append(weak_approx(data))
        x = tuple(coords)
        try:
            gx = eval_map(g, x)
        except PoleAtCenter:
            gx = None
        if gx is not None and all(
            in_max_ideal(v, (gx[j] - b.targets[j]) / b.moduli[j])
            for v, b in members
            for j in range(g.dim)
        ):
            return x
        radii = [
            (v, [d * small_element(v) for d in per]) for v, per in radii
        ]
    raise SolverFailed("could not certify a common point; radii exhausted")