"""Linking elements: small at some localities, large at others.

A link is an element sitting deep inside prescribed balls around zero at one
set of localities while its inverse sits deep inside prescribed balls at
another.  link_pair handles one locality on each side, link_star one center
against many satellites.  build_b stacks pairwise links with the certified
combinator into the two-sided element the block solver consumes.

Everything here returns exact field elements and re-checks its own contract
before returning; a SolverFailed from this module means a bug, not bad input.
"""

from __future__ import annotations

from typing import Sequence

from .combinator import combine
from .elements import FieldElem, one, zero
from .errors import (
    BadParams,
    FloorViolation,
    IncompatibleModuli,
    NotLinkable,
    NotTIndependent,
    SolverFailed,
    Unlinkable,
    ZeroModulus,
)
from .intmath import primes_from
from .localities import (
    Locality,
    coarsening_chain,
    composite,
    contains,
    describe,
    in_max_ideal,
    independent,
    induced_locality,
    is_unit,
    join,
    p_adic,
    refines,
    residue_lift,
    residue_reduce,
    scale_independent,
    small_element,
    strongly_incomparable,
)
from .weak import weak_approx

_GROWTH_CAP = 4096


def _is_unit_at(w: Locality, x: FieldElem) -> bool:
    return contains(w, x) and contains(w, x.inv())


# -- pairwise links ----------------------------------------------------------


def link_pair(
    v1: Locality, v2: Locality, z1: FieldElem, z2: FieldElem, mode: str = "strict_both"
) -> FieldElem:
    """b with b in z1*B_{v1} and 1/b in (1/z2)*B_{v2}.

    B is the maximal ideal in mode strict_both and the local ring in mode
    mixed.  Requires z1 O_w = z2 O_w at the join w; strict_both additionally
    requires the localities to be strongly incomparable.
    """
    if mode not in ("strict_both", "mixed"):
        raise BadParams("mode must be 'strict_both' or 'mixed'")
    if z1.is_zero() or z2.is_zero():
        raise ZeroModulus("link moduli must be nonzero")
    for v in (v1, v2):
        if v.is_trivial:
            raise NotLinkable("the trivial locality has no linking ideal")
    w = join(v1, v2)
    if not w.is_trivial and not _is_unit_at(w, z2 / z1):
        raise IncompatibleModuli(
            f"moduli differ at the common coarsening {describe(w)}"
        )
    if v1 == v2 or refines(v1, v2) or refines(v2, v1):
        if mode == "strict_both":
            raise NotLinkable("comparable localities only admit the mixed link")
        b = z1 if refines(v1, v2) else z2
    elif not strongly_incomparable(v1, v2):
        raise NotLinkable(
            f"{describe(v1)} and {describe(v2)} agree at their join"
        )
    else:
        b = z1 * _link_core(v1, v2, z2 / z1)
    hit = in_max_ideal if mode == "strict_both" else contains
    if not (hit(v1, b / z1) and hit(v2, z2 / b)):
        raise SolverFailed("link element misses its contract")
    return b


def _link_core(v1: Locality, v2: Locality, z2: FieldElem) -> FieldElem:
    """Strict link for strongly incomparable localities, normalized z1 = 1."""
    w = join(v1, v2)
    if w.is_trivial:
        pi = small_element(v2)
        zf = zero(z2.field)
        return weak_approx(
            [
                (v1, zf, one(z2.field), True),
                (v2, z2 / (pi * pi), z2 / pi, True),
            ]
        )
    # distinct induced localities at the join: push the problem to the
    # residue field, solve it there, and lift any integral representative
    bbar = _link_core(
        induced_locality(v1, w),
        induced_locality(v2, w),
        residue_reduce(w, z2),
    )
    return residue_lift(w, bbar)


# -- one center against many satellites --------------------------------------


def link_star(
    v0: Locality,
    others: Sequence[tuple[Locality, FieldElem]],
    z0: FieldElem,
    variant: int = 1,
) -> FieldElem:
    """z with z in zi*m_{vi} for every satellite and 1/z in (1/z0)*m_{v0}
    (variant 1) resp. (1/z0)*O_{v0} (variant 2).

    A trivial center drops the largeness condition entirely.  Hypothesis:
    every nontrivial common coarsening w of the center and a satellite must
    have w(z0) >= w(zi).  Variant 2 tolerates satellites properly refining
    the center by re-centering on a fresh composite refinement.
    """
    if variant not in (1, 2):
        raise BadParams("variant must be 1 or 2")
    if z0.is_zero():
        raise ZeroModulus("z0 must be nonzero")
    for vi, zi in others:
        if zi.is_zero():
            raise ZeroModulus("satellite moduli must be nonzero")
        if vi.is_trivial:
            raise Unlinkable("trivial satellites have no smallness condition")
        if vi == v0:
            raise Unlinkable("the center cannot appear among the satellites")
    if not others:
        if v0.is_trivial:
            return one(z0.field)
        return z0 / small_element(v0)
    if not v0.is_trivial:
        for vi, zi in others:
            for w in coarsening_chain(join(v0, vi)):
                if w.is_trivial:
                    continue
                if not contains(w, z0 / zi):
                    raise Unlinkable(
                        f"modulus at {describe(vi)} outruns z0 at {describe(w)}"
                    )
        if any(refines(v0, vi) for vi, _ in others):
            raise Unlinkable("a satellite coarsens the center")
        refiners = [vi for vi, _ in others if refines(vi, v0)]
        if refiners:
            if variant == 1:
                raise Unlinkable(
                    "a satellite refines the center; only variant 2 applies"
                )
            return link_star(_refined_center(v0, refiners), others, z0, variant=1)
    scaled = [(vi, zi / z0) for vi, zi in others]
    z = z0 * _star_core(v0, scaled)
    for vi, zi in others:
        if not in_max_ideal(vi, z / zi):
            raise SolverFailed(f"star element misses the ball at {describe(vi)}")
    if not v0.is_trivial:
        center_ok = (
            in_max_ideal(v0, z0 / z) if variant == 1 else contains(v0, z0 / z)
        )
        if not center_ok:
            raise SolverFailed("star element misses the largeness condition")
    return z


def _refined_center(v0: Locality, refiners: Sequence[Locality]) -> Locality:
    if v0.kind == "poly-adic" and v0.data[0].degree == 1:
        a = -v0.data[0].coeff(0)
        banned = {vi.data[1] for vi in refiners if vi.kind == "composite"}
        for q in primes_from(2):
            if q not in banned:
                return composite(a, p_adic(q))
    raise Unlinkable(f"no fresh refinement of {describe(v0)} is available")


def _clusters(v0: Locality | None, sats: list[tuple[Locality, FieldElem]]):
    """Dependence components of the satellites, plus the component attached
    to the (nontrivial) center.  Returns (center_component, others)."""
    n = len(sats)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if not independent(sats[i][0], sats[j][0]):
                parent[find(i)] = find(j)
    groups: dict[int, list[tuple[Locality, FieldElem]]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(sats[i])
    c0: list[tuple[Locality, FieldElem]] = []
    rest = []
    for g in groups.values():
        if v0 is not None and any(not independent(v0, vi) for vi, _ in g):
            c0.extend(g)
        else:
            rest.append(g)
    return c0, rest


def _min_ball(v: Locality, zs: Sequence[FieldElem]) -> FieldElem:
    """The modulus among zs whose ball at v sits inside all the others."""
    keep = zs[0]
    for z in zs[1:]:
        if contains(v, z / keep):
            keep = z
    return keep


def _cluster_constraint(group: list[tuple[Locality, FieldElem]], anchored: bool = False):
    """One weak-approximation constraint enforcing every smallness condition
    of a dependence cluster.  With anchored=True the ball is centered away
    from zero, for callers whose other constraints would not already keep
    the solution invertible."""
    if len(group) == 1:
        v, z = group[0]
        if not anchored:
            return (v, zero(z.field), z, True)
        u = small_element(v)
        return (v, z * u * u, z * u * u * u, True)
    w = group[0][0]
    for vi, _ in group[1:]:
        w = join(w, vi)
    if w.is_trivial:
        raise Unlinkable("dependent cluster without a joint coarsening")
    u = small_element(w)
    acc = u
    for _ in range(_GROWTH_CAP):
        if all(in_max_ideal(vi, acc / zi) for vi, zi in group):
            if not anchored:
                return (w, zero(acc.field), acc, True)
            return (w, acc * u * u, acc * u * u * u, True)
        acc = acc * u
    raise SolverFailed("cluster smallness element did not converge")


def _star_core(v0: Locality, sats: list[tuple[Locality, FieldElem]]) -> FieldElem:
    """Star link with z0 normalized to 1."""
    field = sats[0][1].field
    if v0.is_trivial:
        groups = _clusters(None, sats)[1]
        if len(groups) == 1:
            v, _x, z, _s = _cluster_constraint(groups[0])
            return z * small_element(v)
        return weak_approx([_cluster_constraint(g, anchored=True) for g in groups])
    c0, rest = _clusters(v0, sats)
    if not c0:
        u0 = small_element(v0)
        cons = [(v0, u0.inv(), one(field), True)]
        cons += [_cluster_constraint(g) for g in rest]
        return weak_approx(cons)
    if not rest:
        return _star_residue(v0, c0)
    zp = _star_core(v0, c0)
    y = _star_growth(v0, zp, c0)
    cons = [(v0, zp, y, True)]
    cons += [_cluster_constraint(g) for g in rest]
    return weak_approx(cons)


def _star_growth(v0: Locality, zp: FieldElem, c0) -> FieldElem:
    """A radius Y so that any point of zp + Y*m_{v0} keeps the largeness at
    v0 and the smallness at every center-cluster satellite.

    The shrink factor lives in the maximal ideal of the finest proper
    coarsening of the center: the satellite conditions sit at coarsenings,
    where the center's own small element can be a unit.
    """
    chain = coarsening_chain(v0)
    if len(chain) < 2 or chain[1].is_trivial:
        raise SolverFailed("center shares no proper coarsening with its cluster")
    u = small_element(chain[1])
    y = zp * u
    joins = [(vi, zi, join(v0, vi)) for vi, zi in c0]
    for _ in range(_GROWTH_CAP):
        ok = all(in_max_ideal(w, y / zi) for _vi, zi, w in joins)
        if ok and v0.is_ordering:
            # |2Y| <= |zp| - |1/zp| keeps |zp + Y m| strictly above 1
            ok = contains(v0, (y + y) / (zp - zp.inv()))
        if ok:
            return y
        y = y * u
    raise SolverFailed("center radius did not converge")


def _star_residue(v0: Locality, sats: list[tuple[Locality, FieldElem]]) -> FieldElem:
    """All-dependent case: every satellite shares a nontrivial coarsening
    with the center; solve the reduced problem in the residue field."""
    w = v0
    for vi, _ in sats:
        w = join(w, vi)
    if w.is_trivial:
        raise Unlinkable("dependent cluster without a joint coarsening")
    field = sats[0][1].field
    tightened = []
    for vi, zi in sats:
        if in_max_ideal(w, zi.inv()):
            zi = one(field)
        if not is_unit(w, zi):
            raise SolverFailed("satellite modulus is not a unit at the joint coarsening")
        tightened.append((vi, zi))
    v0b = induced_locality(v0, w)
    merged: list[tuple[Locality, FieldElem]] = []
    for vi, zi in tightened:
        vib = induced_locality(vi, w)
        if vib == v0b:
            raise Unlinkable(
                f"{describe(vi)} is indistinguishable from the center at {describe(w)}"
            )
        zib = residue_reduce(w, zi)
        for k, (vjb, zjb) in enumerate(merged):
            if vjb == vib:
                merged[k] = (vib, _min_ball(vib, [zib, zjb]))
                break
        else:
            merged.append((vib, zib))
    zbar = link_star(v0b, merged, one(merged[0][1].field), variant=1)
    return residue_lift(w, zbar)


# -- the two-sided block element ---------------------------------------------


def build_b(
    s1: Sequence[Locality],
    s2: Sequence[Locality],
    z: FieldElem,
    zp: FieldElem,
    cert,
    situation: str = "m",
) -> FieldElem:
    """b small in scale t*z on all of s1 while 1/b is small in scale t*zp on
    all of s2, in the ball sense of the situation (m strict, o closed).

    The cross pairs must be t-independent for the certificate scale, and
    neither modulus may become small at any common coarsening of the sides.
    """
    if situation not in ("m", "o"):
        raise BadParams("situation must be 'm' or 'o'")
    if not s1 or not s2:
        raise BadParams("both sides must be nonempty")
    if z.is_zero() or zp.is_zero():
        raise ZeroModulus("block moduli must be nonzero")
    t = cert.t
    for v in s1:
        for vp in s2:
            if not scale_independent(v, vp, t):
                raise NotTIndependent(
                    f"{describe(v)} and {describe(vp)} are not t-independent"
                )
            for w in coarsening_chain(join(v, vp)):
                if w.is_trivial:
                    continue
                if in_max_ideal(w, z) or in_max_ideal(w, zp):
                    raise FloorViolation(
                        f"a modulus is small at the shared coarsening {describe(w)}"
                    )
    mode = "strict_both" if situation == "m" else "mixed"
    outer = []
    for v in s1:
        row = []
        for vp in s2:
            zv = t * z if contains(v, z) else t
            zvp = (t * zp).inv() if contains(vp, zp) else t.inv()
            row.append(link_pair(v, vp, zv, zvp, mode))
        outer.append(combine(cert, row).inv())
    b = combine(cert, outer).inv()
    hit = in_max_ideal if situation == "m" else contains
    for v in s1:
        if not (hit(v, b / t) and hit(v, b / (t * z))):
            raise SolverFailed("block element misses its contract on the first side")
    for vp in s2:
        bi = b.inv()
        if not (hit(vp, bi / t) and hit(vp, bi / (t * zp))):
            raise SolverFailed("block element misses its contract on the second side")
    return b
