"""Simultaneous approximation at pairwise independent localities.

weak_approx takes targets (v, x, z, strict) and returns one field element y
with y - x in z*O_v (strict False) or z*m_v (strict True) for every target.
The localities must be pairwise independent; dependent families belong to
the block solver, which reduces them to this routine.

The strategy is the same over each base field: solve the non-archimedean
congruences by an explicit CRT over the relevant principal ideal domain
(Z, Z[i], Q[T]), then steer the leftover lattice freedom into the single
admissible window place (real order, complex disc, degree place) by
shrinking the lattice with powers of a fresh auxiliary prime.  The fresh
prime is a unit at every congruence place, so the window loop never
disturbs a congruence.  Ordering and rank-two targets over Q(T) are first
replaced by slightly deeper poly-adic congruences; an element of positive
value at the underlying linear place is infinitesimal for the order, which
makes the replacement imply the original ball strictly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import gaussian as GZ
from .elements import Q, QI, QT, FieldElem, q_elem, qi_elem, qi_int_triple, qt_elem
from .errors import (
    BadParams,
    DependentInputs,
    FieldMismatch,
    SolverFailed,
    TrivialLocality,
    ZeroModulus,
)
from .intmath import crt_list, inv_mod, primes_from
from .laurent import laurent_prefix
from .localities import (
    Locality,
    _comp_val,
    contains,
    degree_val,
    describe,
    disc_val,
    in_max_ideal,
    independent,
    poly_mult,
    rat_val,
)
from .qpoly import QP_ONE, QP_ZERO, QPoly, qpoly_inv_mod

Target = tuple[Locality, FieldElem, FieldElem, bool]

# the window loops converge geometrically; this cap only guards against bugs
_WINDOW_CAP = 4096


def _validate(targets: Sequence[Target]) -> str:
    if not targets:
        raise BadParams("empty target list")
    field = targets[0][0].field
    for v, x, z, _ in targets:
        if v.is_trivial:
            raise TrivialLocality("cannot approximate at the trivial locality")
        if v.field != field or x.field != field or z.field != field:
            raise FieldMismatch("targets must all live on one field")
        if z.is_zero():
            raise ZeroModulus("zero modulus")
    for i in range(len(targets)):
        for j in range(i + 1, len(targets)):
            vi, vj = targets[i][0], targets[j][0]
            if not independent(vi, vj):
                raise DependentInputs(
                    f"{describe(vi)} and {describe(vj)} are not independent"
                )
    return field


def _hit(v: Locality, y: FieldElem, x: FieldElem, z: FieldElem, strict: bool) -> bool:
    w = (y - x) / z
    return in_max_ideal(v, w) if strict else contains(v, w)


def _certify(targets: Sequence[Target], y: FieldElem) -> FieldElem:
    for v, x, z, strict in targets:
        if not _hit(v, y, x, z, strict):
            raise SolverFailed(f"candidate misses the target at {describe(v)}")
    return y


def weak_approx(targets: Sequence[Target], aux_prime: int | None = None) -> FieldElem:
    """One element inside every target ball.

    aux_prime, when given, fixes the rational prime used to shrink the
    window lattice; the excluded-place solver threads the excluded prime
    through here so that the only new denominator it introduces sits at
    that place.
    """
    field = _validate(targets)
    if len(targets) == 1:
        v, x, z, strict = targets[0]
        return _certify(targets, x)
    if field == Q:
        y = _weak_q(targets, aux_prime)
    elif field == QI:
        y = _weak_qi(targets, aux_prime)
    else:
        y = _weak_qt(targets)
    return _certify(targets, y)


def _fresh_prime(used: set[int], aux_prime: int | None) -> int:
    if aux_prime is not None:
        if aux_prime in used:
            raise BadParams("auxiliary prime collides with a congruence place")
        return aux_prime
    for q in primes_from(2):
        if q not in used:
            return q
    raise AssertionError("unreachable")


# -- rationals ---------------------------------------------------------------


def _weak_q(targets: Sequence[Target], aux_prime: int | None) -> FieldElem:
    window = None
    plan = []
    used: set[int] = set()
    D = 1
    for v, x, z, strict in targets:
        if v.kind == "real":
            window = (x.a, abs(z.a), strict)
            continue
        p = v.data[0]
        used.add(p)
        m = rat_val(z.a, p) + (1 if strict else 0)
        c = max(0, -rat_val(x.a, p)) if x.a else 0
        D *= p**c
        if m + c > 0:
            plan.append((p, m + c, x.a))
    crt_in = []
    for p, mp, xa in plan:
        mod = p**mp
        val = D * xa
        crt_in.append((val.numerator * inv_mod(val.denominator, mod) % mod, mod))
    R, P = crt_list(crt_in)
    y0 = Fraction(R, D)
    if window is None:
        return q_elem(y0)
    center, radius, strict = window
    q = _fresh_prime(used, aux_prime)
    M = Fraction(P, D)
    for s in range(_WINDOW_CAP):
        step = M / q**s
        y = y0 + round((center - y0) / step) * step
        err = abs(y - center)
        if err < radius or (not strict and err == radius):
            return q_elem(y)
    raise SolverFailed("window loop failed to converge")


# -- gaussian rationals ------------------------------------------------------


def _gi_residue(x: FieldElem, g, mod):
    """Class of x modulo the power `mod` of the gaussian prime g.

    Requires nonnegative value at g; any g dividing the denominator is
    cancelled against the numerator before inverting what remains.
    """
    a, b, d = qi_int_triple(x)
    num, den = (a, b), (d, 0)
    k = GZ.gval(den, g)
    if k:
        gk = GZ.gpow(g, k)
        num = GZ.gdiv_exact(num, gk)
        den = GZ.gdiv_exact(den, gk)
    return GZ.gmod(GZ.gmul(num, GZ.ginv_mod(den, mod)), mod)


def _weak_qi(targets: Sequence[Target], aux_prime: int | None) -> FieldElem:
    window = None
    plan = []
    used: set[int] = set()
    D = (1, 0)
    for v, x, z, strict in targets:
        if v.kind == "complex":
            window = (x, z.re * z.re + z.im * z.im, strict)
            continue
        g = v.data[0]
        used.add(GZ.residue_char(g))
        m = disc_val(v, z) + (1 if strict else 0)
        c = max(0, -disc_val(v, x)) if not x.is_zero() else 0
        D = GZ.gmul(D, GZ.gpow(g, c))
        if m + c > 0:
            plan.append((g, m + c, x))
    d_el = qi_elem(Fraction(D[0]), Fraction(D[1]))
    crt_in = []
    for g, mp, x in plan:
        mod = GZ.gpow(g, mp)
        crt_in.append((_gi_residue(x * d_el, g, mod), mod))
    R, P = GZ.gcrt(crt_in)
    y0 = qi_elem(Fraction(R[0]), Fraction(R[1])) / d_el
    if window is None:
        return y0
    center, norm_radius, strict = window
    q = _fresh_prime(used, aux_prime)
    base = qi_elem(Fraction(P[0]), Fraction(P[1])) / d_el
    q_el = qi_elem(Fraction(q))
    for s in range(_WINDOW_CAP):
        step = base / q_el**s
        w = (center - y0) / step
        y = y0 + qi_elem(Fraction(round(w.re)), Fraction(round(w.im))) * step
        err = y - center
        n = err.re * err.re + err.im * err.im
        if n < norm_radius or (not strict and n == norm_radius):
            return y
    raise SolverFailed("window loop failed to converge")


# -- rational functions ------------------------------------------------------


def _qt_residue(x: FieldElem, f: QPoly, mod: QPoly) -> QPoly:
    """Class of x modulo the power `mod` of the irreducible f; same
    cancellation contract as the gaussian variant."""
    num, den = x.num, x.den
    k = poly_mult(den, f)
    if k:
        fk = f**k
        num = num // fk
        den = den // fk
    return (num * qpoly_inv_mod(den, mod)) % mod


def _linear(a: Fraction) -> QPoly:
    return QPoly((-a, 1))


def _congruence_depth(v: Locality, z: FieldElem, strict: bool) -> tuple[QPoly, int]:
    """Reduce one finite Q(T) target to (f, required exponent)."""
    if v.kind == "poly-adic":
        return v.data[0], disc_val(v, z) + (1 if strict else 0)
    if v.kind == "order-at":
        f = _linear(v.data[0])
        return f, poly_mult(z.num, f) - poly_mult(z.den, f) + 1
    # composite: beating the first lexicographic coordinate wins outright
    a, _p = v.data
    return _linear(a), _comp_val(z, a, _p)[0] + 1


def _weak_qt(targets: Sequence[Target]) -> FieldElem:
    window = None
    plan = []
    all_fs = []
    D = QP_ONE
    for v, x, z, strict in targets:
        if v.kind == "degree":
            window = (x, disc_val(v, z) + (1 if strict else 0))
            continue
        if v.kind == "order-at-inf":
            window = (x, disc_val(degree_val(), z) + 1)
            continue
        f, m = _congruence_depth(v, z, strict)
        all_fs.append(f)
        c = max(0, poly_mult(x.den, f) - poly_mult(x.num, f)) if not x.is_zero() else 0
        D = D * f**c
        if m + c > 0:
            plan.append((f, m + c, x))
    d_el = qt_elem(D)
    R, P = QP_ZERO, QP_ONE
    for f, mp, x in plan:
        mod = f**mp
        r = _qt_residue(x * d_el, f, mod)
        # x = R + P*k with k chosen to hit r modulo this power
        k = ((r - R) * qpoly_inv_mod(P, mod)) % mod
        R = (R + P * k) % (P * mod)
        P = P * mod
    r_el = qt_elem(R)
    y0 = r_el / d_el
    if window is None:
        return y0
    center, m_inf = window
    s = m_inf + P.degree - D.degree
    g = (d_el * center - r_el) / qt_elem(P)
    b = 0
    while any(f(b) == 0 for f in all_fs):
        b += 1
    h = qt_elem(g.num.shift(b), g.den.shift(b))
    le = laurent_prefix(h, None, 1 - s).to_element()
    a_el = qt_elem(le.num.shift(-b), le.den.shift(-b))
    return (r_el + a_el * qt_elem(P)) / d_el
