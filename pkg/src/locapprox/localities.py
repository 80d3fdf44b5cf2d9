"""The locality catalog.

A locality packages a subring O of the base field together with a maximal
ideal m, in the uniform style that covers Krull valuations (O = valuation
ring), orderings (O = [-1, 1], m = (-1, 1)) and absolute values (norm <= 1,
norm < 1). Catalog kinds:

  Q     p-adic(p), real, trivial
  Q(i)  gaussian-prime(g), complex, trivial
  Q(T)  poly-adic(f), degree, order-at(a, side), order-at-inf(side),
        composite(a, p), trivial

composite(a, p) is the rank-two valuation refining (T-a)-adic by the p-adic
valuation on the residue field Q. Refinement means containment of local
rings; the coarsening chains are short and explicit, which keeps joins and
comparability decidable by table lookup plus exact membership tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import gaussian as GZ
from .errors import (
    BadParams,
    DegreeCapExceeded,
    FieldMismatch,
    NotAValuation,
    NotInRing,
    TrivialLocality,
    UnsupportedResidue,
)
from .intmath import is_prime
from .laurent import sign_at
from .qpoly import QPoly, irreducible_q
from .elements import (
    Q,
    QI,
    QT,
    FieldElem,
    from_rational,
    gen,
    q_elem,
    qi_elem,
    qi_int_triple,
    qt_elem,
    zero,
)

ORDERING_KINDS = frozenset({"real", "order-at", "order-at-inf"})
VALUATION_KINDS = frozenset({"p-adic", "gaussian-prime", "poly-adic", "degree", "composite", "trivial"})
ABS_KINDS = frozenset({"complex"})
DISCRETE_KINDS = frozenset({"p-adic", "gaussian-prime", "poly-adic", "degree"})


@dataclass(frozen=True)
class Locality:
    field: str
    kind: str
    data: tuple = ()

    def __repr__(self) -> str:
        return f"Locality({describe(self)})"

    @property
    def is_trivial(self) -> bool:
        return self.kind == "trivial"

    @property
    def is_ordering(self) -> bool:
        return self.kind in ORDERING_KINDS

    @property
    def is_valuation(self) -> bool:
        return self.kind in VALUATION_KINDS

    @property
    def is_abs(self) -> bool:
        return self.kind in ABS_KINDS


def describe(v: Locality) -> str:
    k = v.kind
    if k == "p-adic":
        return f"{v.data[0]}-adic"
    if k == "gaussian-prime":
        a, b = v.data[0]
        return f"gaussian({a}+{b}i)" if b else f"gaussian({a})"
    if k == "poly-adic":
        from .qpoly import qpoly_str

        return f"({qpoly_str(v.data[0], 'T')})-adic"
    if k == "order-at":
        return f"order-at({v.data[0]}{v.data[1]})"
    if k == "order-at-inf":
        return f"order-at(inf{v.data[0]})"
    if k == "composite":
        return f"composite({v.data[0]}; {v.data[1]}-adic)"
    return f"{k}/{v.field}"


# -- constructors ------------------------------------------------------------


def trivial(field: str) -> Locality:
    return Locality(field, "trivial")


def p_adic(p: int) -> Locality:
    if not is_prime(p):
        raise BadParams(f"{p} is not prime")
    return Locality(Q, "p-adic", (p,))


def real_order() -> Locality:
    return Locality(Q, "real")


def gauss_prime(g) -> Locality:
    if isinstance(g, FieldElem):
        a, b, d = qi_int_triple(g)
        if d != 1:
            raise BadParams("gaussian prime must be a gaussian integer")
        g = (a, b)
    g = GZ.canonical_associate(tuple(g))
    if not GZ.is_gaussian_prime(g):
        raise BadParams(f"{g} is not a gaussian prime")
    return Locality(QI, "gaussian-prime", (g,))


def complex_abs() -> Locality:
    return Locality(QI, "complex")


def poly_adic(f: QPoly) -> Locality:
    if not isinstance(f, QPoly) or f.degree < 1:
        raise BadParams("poly-adic needs a nonconstant polynomial")
    if not f.is_monic():
        raise BadParams("poly-adic modulus must be monic")
    if f.degree > 6:
        raise DegreeCapExceeded("poly-adic modulus degree is capped at 6")
    if not irreducible_q(f):
        raise BadParams("poly-adic modulus must be irreducible")
    return Locality(QT, "poly-adic", (f,))


def degree_val() -> Locality:
    return Locality(QT, "degree")


def order_at(a, side: str) -> Locality:
    if side not in ("+", "-"):
        raise BadParams("side must be '+' or '-'")
    return Locality(QT, "order-at", (Fraction(a), side))


def order_at_inf(side: str) -> Locality:
    if side not in ("+", "-"):
        raise BadParams("side must be '+' or '-'")
    return Locality(QT, "order-at-inf", (side,))


def composite(a, inner: Locality) -> Locality:
    """The locality on Q(T) refining (T-a)-adic by `inner` on the residue
    field Q. composite(a, real) is identified with order-at(a, '+'), and a
    trivial inner gives back poly-adic(T-a)."""
    if inner.field != Q:
        raise BadParams("inner locality must live on Q")
    a = Fraction(a)
    if inner.kind == "p-adic":
        return Locality(QT, "composite", (a, inner.data[0]))
    if inner.kind == "real":
        return order_at(a, "+")
    if inner.kind == "trivial":
        return poly_adic(QPoly((-a, 1)))
    raise BadParams(f"unsupported inner locality kind {inner.kind!r}")


# -- exact valuations on raw data --------------------------------------------


def rat_val(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise BadParams("valuation of zero")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def poly_mult(p: QPoly, f: QPoly) -> int:
    """Multiplicity of the factor f in the nonzero polynomial p."""
    v = 0
    while True:
        q, r = p.divmod(f)
        if not r.is_zero():
            return v
        p = q
        v += 1


def disc_val(v: Locality, x: FieldElem) -> int:
    """Integer value of x under a discrete rank-one valuation kind."""
    if v.kind not in DISCRETE_KINDS:
        raise NotAValuation(f"{describe(v)} is not discrete rank one")
    if x.field != v.field:
        raise FieldMismatch("element from the wrong field")
    if x.is_zero():
        raise BadParams("valuation of zero")
    if v.kind == "p-adic":
        return rat_val(x.a, v.data[0])
    if v.kind == "gaussian-prime":
        a, b, d = qi_int_triple(x)
        g = v.data[0]
        return GZ.gval((a, b), g) - GZ.gval((d, 0), g)
    if v.kind == "poly-adic":
        f = v.data[0]
        return poly_mult(x.num, f) - poly_mult(x.den, f)
    return x.den.degree - x.num.degree


def _comp_val(x: FieldElem, a: Fraction, p: int) -> tuple[int, int]:
    """Lexicographic value of nonzero x under composite(a, p)."""
    u = QPoly((-a, 1))
    k = poly_mult(x.num, u) - poly_mult(x.den, u)
    # unit part at the (T-a)-adic place, evaluated at a
    nw = x.num
    dw = x.den
    kn = poly_mult(nw, u)
    kd = poly_mult(dw, u)
    for _ in range(kn):
        nw = nw // u
    for _ in range(kd):
        dw = dw // u
    r = nw(a) / dw(a)
    return k, rat_val(r, p)


def _residue_at_linear(x: FieldElem, a: Fraction) -> Fraction:
    """Value of x at T = a after clearing common (T-a) powers; requires
    nonnegative (T-a)-adic value."""
    u = QPoly((-a, 1))
    kn = poly_mult(x.num, u)
    kd = poly_mult(x.den, u)
    if kn < kd:
        raise NotInRing("pole at the center")
    if kn > kd:
        return Fraction(0)
    nw, dw = x.num, x.den
    for _ in range(kn):
        nw = nw // u
        dw = dw // u
    return nw(a) / dw(a)


# -- membership --------------------------------------------------------------


def contains(v: Locality, x: FieldElem) -> bool:
    """x in O_v."""
    if x.field != v.field:
        raise FieldMismatch(f"{describe(v)} vs element over {x.field}")
    if x.is_zero():
        return True
    k = v.kind
    if k == "trivial":
        return True
    if k in DISCRETE_KINDS:
        return disc_val(v, x) >= 0
    if k == "real":
        return -1 <= x.a <= 1
    if k == "complex":
        return x.a * x.a + x.b * x.b <= 1
    if k == "order-at":
        a, side = v.data
        onex = from_rational(QT, 1)
        return sign_at(onex - x, a, side) >= 0 and sign_at(onex + x, a, side) >= 0
    if k == "order-at-inf":
        side = v.data[0]
        onex = from_rational(QT, 1)
        return sign_at(onex - x, None, side) >= 0 and sign_at(onex + x, None, side) >= 0
    if k == "composite":
        a, p = v.data
        kk, m = _comp_val(x, a, p)
        return kk > 0 or (kk == 0 and m >= 0)
    raise BadParams(f"unknown kind {k!r}")


def in_max_ideal(v: Locality, x: FieldElem) -> bool:
    """x in m_v."""
    if x.field != v.field:
        raise FieldMismatch(f"{describe(v)} vs element over {x.field}")
    if x.is_zero():
        return True
    k = v.kind
    if k == "trivial":
        return False
    if k in DISCRETE_KINDS:
        return disc_val(v, x) > 0
    if k == "real":
        return -1 < x.a < 1
    if k == "complex":
        return x.a * x.a + x.b * x.b < 1
    if k == "order-at":
        a, side = v.data
        onex = from_rational(QT, 1)
        return sign_at(onex - x, a, side) > 0 and sign_at(onex + x, a, side) > 0
    if k == "order-at-inf":
        side = v.data[0]
        onex = from_rational(QT, 1)
        return sign_at(onex - x, None, side) > 0 and sign_at(onex + x, None, side) > 0
    if k == "composite":
        a, p = v.data
        kk, m = _comp_val(x, a, p)
        return kk > 0 or (kk == 0 and m > 0)
    raise BadParams(f"unknown kind {k!r}")


def is_unit(v: Locality, x: FieldElem) -> bool:
    return not x.is_zero() and contains(v, x) and not in_max_ideal(v, x)


def cmp_val(w: Locality, a: FieldElem, b: FieldElem) -> str:
    """Compare w(a) with w(b) for a valuation w: 'lt', 'eq' or 'gt' meaning
    w(a) < w(b), equal, or greater. w(0) counts as +infinity."""
    if not w.is_valuation:
        raise NotAValuation(f"{describe(w)} is not a valuation")
    az, bz = a.is_zero(), b.is_zero()
    if az and bz:
        return "eq"
    if az:
        return "gt"
    if bz:
        return "lt"
    r = a / b
    if not contains(w, r):
        return "lt"
    if in_max_ideal(w, r):
        return "gt"
    return "eq"


# -- coarsening structure ----------------------------------------------------


def coarsening_chain(v: Locality) -> tuple[Locality, ...]:
    """All coarsenings of v (rings containing O_v), finest first."""
    t = trivial(v.field)
    if v.kind == "order-at":
        a = v.data[0]
        return (v, poly_adic(QPoly((-a, 1))), t)
    if v.kind == "composite":
        a = v.data[0]
        return (v, poly_adic(QPoly((-a, 1))), t)
    if v.kind == "order-at-inf":
        return (v, degree_val(), t)
    if v.kind == "trivial":
        return (t,)
    return (v, t)


def refines(v: Locality, w: Locality) -> bool:
    """O_v contained in O_w (w is a coarsening of v)."""
    if v.field != w.field:
        raise FieldMismatch("localities on different fields")
    return w in coarsening_chain(v)


def join(v: Locality, w: Locality) -> Locality:
    """Finest common coarsening."""
    if v.field != w.field:
        raise FieldMismatch("localities on different fields")
    wchain = set(coarsening_chain(w))
    for u in coarsening_chain(v):
        if u in wchain:
            return u
    raise AssertionError("chains always share the trivial locality")


def independent(v: Locality, w: Locality) -> bool:
    """Distinct nontrivial localities inducing distinct topologies; in the
    catalog this is exactly 'the join is trivial'."""
    if v.is_trivial or w.is_trivial:
        raise TrivialLocality("independence concerns nontrivial localities")
    return v != w and join(v, w).is_trivial


def induced_locality(v: Locality, w: Locality) -> Locality:
    """What v induces on the residue field of its coarsening w."""
    if not refines(v, w):
        raise BadParams("induced locality needs a coarsening of v")
    if w.is_trivial:
        return v
    if v == w:
        return trivial(_residue_field(w))
    if w.kind == "poly-adic" and w.data[0].degree == 1:
        if v.kind == "composite":
            return p_adic(v.data[1])
        if v.kind == "order-at":
            return real_order()
    if w.kind == "degree" and v.kind == "order-at-inf":
        return real_order()
    raise UnsupportedResidue(f"no induced locality for {describe(v)} at {describe(w)}")


def _residue_field(w: Locality) -> str:
    if w.kind in ("degree",) or (w.kind == "poly-adic" and w.data[0].degree == 1):
        return Q
    if w.kind == "trivial":
        return w.field
    raise UnsupportedResidue(f"{describe(w)} has no catalog residue field")


def strongly_incomparable(v: Locality, w: Locality) -> bool:
    if v.field != w.field:
        raise FieldMismatch("localities on different fields")
    if v == w or refines(v, w) or refines(w, v):
        return False
    j = join(v, w)
    if j.is_trivial:
        return True
    return induced_locality(v, j) != induced_locality(w, j)


@dataclass(frozen=True)
class RelationReport:
    v: Locality
    w: Locality
    equal: bool
    v_refines_w: bool
    w_refines_v: bool
    join: Locality
    independent: bool
    strongly_incomparable: bool


def relation(v: Locality, w: Locality) -> RelationReport:
    j = join(v, w)
    eq = v == w
    return RelationReport(
        v=v,
        w=w,
        equal=eq,
        v_refines_w=refines(v, w),
        w_refines_v=refines(w, v),
        join=j,
        independent=(not eq) and j.is_trivial and not v.is_trivial and not w.is_trivial,
        strongly_incomparable=strongly_incomparable(v, w),
    )


def scale_independent(v: Locality, w: Locality, t: FieldElem) -> bool:
    """t-independence: t is a unit at the join, and two orderings must in
    addition be strongly incomparable."""
    if t.is_zero():
        raise BadParams("scale element must be nonzero")
    if v == w:
        return False
    j = join(v, w)
    if not (contains(j, t) and contains(j, t.inv())):
        return False
    if v.is_ordering and w.is_ordering:
        return strongly_incomparable(v, w)
    return True


# -- residues ----------------------------------------------------------------


def residue_characteristic(v: Locality):
    """Characteristic of the residue field: a prime, 0 for a char-zero
    residue field, or None where there is no residue field in play."""
    k = v.kind
    if k == "p-adic":
        return v.data[0]
    if k == "gaussian-prime":
        return GZ.residue_char(v.data[0])
    if k == "composite":
        return v.data[1]
    if k in ("poly-adic", "degree"):
        return 0
    return None


def residue_reduce(v: Locality, x: FieldElem):
    """Image of x in the residue field of a valuation locality.

    Returns an int mod p for p-adic and split/ramified gaussian primes, an
    (int, int) pair mod q for inert ones, a Q-element for the function-field
    places with residue field Q, and x itself for the trivial locality.
    """
    if x.field != v.field:
        raise FieldMismatch("element from the wrong field")
    if not v.is_valuation:
        raise NotAValuation(f"{describe(v)} has no residue map here")
    if not contains(v, x):
        raise NotInRing("element outside the local ring")
    k = v.kind
    if k == "trivial":
        return x
    if k == "p-adic":
        p = v.data[0]
        if x.is_zero():
            return 0
        num, den = x.a.numerator, x.a.denominator
        return num * pow(den, -1, p) % p
    if k == "gaussian-prime":
        return _gauss_residue(v.data[0], x)
    if k == "poly-adic":
        f = v.data[0]
        if f.degree != 1:
            raise UnsupportedResidue("residue field beyond Q is not represented")
        a = -f.coeff(0)
        if x.is_zero():
            return q_elem(0)
        return q_elem(_residue_at_linear(x, a))
    if k == "degree":
        if x.is_zero():
            return q_elem(0)
        if x.num.degree < x.den.degree:
            return q_elem(0)
        return q_elem(x.num.lead / x.den.lead)
    if k == "composite":
        a, p = v.data
        if x.is_zero():
            return 0
        r = _residue_at_linear(x, a)
        if r == 0:
            return 0
        return r.numerator * pow(r.denominator, -1, p) % p
    raise UnsupportedResidue(f"no residue map for {describe(v)}")


def _gauss_residue(g, x: FieldElem):
    if x.is_zero():
        return 0 if GZ.gnorm(g) != GZ.residue_char(g) ** 2 else (0, 0)
    a, b, d = qi_int_triple(x)
    p = GZ.residue_char(g)
    inert = GZ.gnorm(g) == p * p
    if inert:
        n = (a, b)
        q = p
        dd = d
        while dd % q == 0:
            dd //= q
            n = GZ.gdiv_exact(n, (q, 0))
        inv = pow(dd, -1, q)
        return (n[0] * inv % q, n[1] * inv % q)
    vd = GZ.gval((d, 0), g)
    for r in range(p):
        t = GZ.gsub((a, b), (r * d, 0))
        if t == (0, 0) or GZ.gval(t, g) >= vd + 1:
            return r
    raise AssertionError("residue search must succeed for ring members")


def residue_lift(v: Locality, r) -> FieldElem:
    """A canonical preimage of a residue-field element."""
    k = v.kind
    if k in ("poly-adic", "degree"):
        if k == "poly-adic" and v.data[0].degree != 1:
            raise UnsupportedResidue("residue field beyond Q is not represented")
        if isinstance(r, FieldElem) and r.field == Q:
            r = r.a
        return from_rational(QT, Fraction(r))
    if k == "p-adic" or k == "composite":
        return from_rational(v.field, int(r))
    if k == "gaussian-prime":
        if isinstance(r, tuple):
            return qi_elem(r[0], r[1])
        return qi_elem(int(r), 0)
    if k == "trivial":
        return r
    raise UnsupportedResidue(f"no lift for {describe(v)}")


# -- distinguished small elements -------------------------------------------


def small_element(v: Locality) -> FieldElem:
    """A canonical nonzero element of the maximal ideal (for orderings and
    absolute values, one of norm at most 1/2)."""
    k = v.kind
    if k == "trivial":
        raise TrivialLocality("the trivial maximal ideal is zero")
    if k == "p-adic":
        return q_elem(v.data[0])
    if k == "real":
        return q_elem(Fraction(1, 2))
    if k == "gaussian-prime":
        a, b = v.data[0]
        return qi_elem(a, b)
    if k == "complex":
        return qi_elem(Fraction(1, 2), 0)
    if k == "poly-adic":
        return qt_elem(v.data[0])
    if k == "degree":
        return qt_elem(QPoly((1,)), QPoly((0, 1)))
    if k == "order-at":
        return qt_elem(QPoly((-v.data[0], 1)))
    if k == "order-at-inf":
        return qt_elem(QPoly((1,)), QPoly((0, 1)))
    if k == "composite":
        return from_rational(QT, v.data[1])
    raise BadParams(f"unknown kind {k!r}")


# -- descriptors (JSON-facing) ----------------------------------------------


def descriptor(v: Locality) -> dict:
    k = v.kind
    out: dict = {"field": v.field, "kind": k}
    if k == "p-adic":
        out["p"] = v.data[0]
    elif k == "gaussian-prime":
        from .elements import format_element

        a, b = v.data[0]
        out["g"] = format_element(qi_elem(a, b))
    elif k == "poly-adic":
        from .qpoly import qpoly_str

        out["f"] = qpoly_str(v.data[0], "T")
    elif k == "order-at":
        out["a"] = str(v.data[0])
        out["side"] = v.data[1]
    elif k == "order-at-inf":
        out["sign"] = v.data[0]
    elif k == "composite":
        out["a"] = str(v.data[0])
        out["inner"] = {"field": Q, "kind": "p-adic", "p": v.data[1]}
    return out


def _parse_center(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise BadParams(f"bad center {s!r}") from None


def locality_from_descriptor(d: dict, field: str | None = None) -> Locality:
    """Locality from its JSON form.

    The field may ride along in the descriptor or come from the enclosing
    problem file; an inline field wins.  Center and side keys accept both
    the compact spellings ("a", "sign") and the verbose ones.
    """
    if not isinstance(d, dict) or "kind" not in d:
        raise BadParams("locality descriptor needs a 'kind'")
    field, k = d.get("field", field), d["kind"]
    if field is None:
        raise BadParams("locality descriptor needs a field, inline or from context")
    if k == "trivial":
        if field not in (Q, QI, QT):
            raise BadParams(f"unknown field {field!r}")
        return trivial(field)
    if field == Q:
        if k == "p-adic":
            return p_adic(int(d["p"]))
        if k == "real":
            return real_order()
    elif field == QI:
        if k == "gaussian-prime":
            from .elements import parse_element

            return gauss_prime(parse_element(str(d["g"]), QI))
        if k == "complex":
            return complex_abs()
    elif field == QT:
        if k == "poly-adic":
            from .elements import parse_element

            f = parse_element(str(d["f"]), QT)
            if f.den.degree > 0:
                raise BadParams("poly-adic modulus must be a polynomial")
            return poly_adic(f.num)
        if k == "degree":
            return degree_val()
        if k == "order-at":
            return order_at(_parse_center(d.get("a", d.get("center"))), str(d.get("side", d.get("sign"))))
        if k == "order-at-inf":
            return order_at_inf(str(d.get("sign", d.get("side"))))
        if k == "composite":
            inner = locality_from_descriptor(d["inner"], Q)
            return composite(_parse_center(d.get("a", d.get("center"))), inner)
    raise BadParams(f"unknown locality kind {k!r} over {field!r}")
