"""Folding elements through a certificate.

combine2(c, x, y) evaluates the homogenized certificate polynomial at
(x, y) and divides by the scale t. Its two defining properties, relative
to any locality the certificate serves:

  (1) if x/t and y/t both lie in O_v then the result lies in x O_v or y O_v;
  (2) if 1/x or 1/y lies in O_v then the inverse of the result lies in both
      x^(-1) O_v and y^(-1) O_v.

combine folds a whole list from the right. selector(c, b) is the value the
fold converges to on constant lists, a ratio of the leading coefficient to
the reversed evaluation at b.
"""

from __future__ import annotations

from .certificates import Certificate
from .elements import FieldElem
from .errors import BadParams, RootHit, ZeroInput, ZeroOutput
from .localities import Locality, contains


def combine2(cert: Certificate, x: FieldElem, y: FieldElem) -> FieldElem:
    if x.is_zero() or y.is_zero():
        raise ZeroInput("the combinator needs nonzero inputs")
    out = cert.f.homog_eval(x, y) / cert.t
    if out.is_zero():
        raise ZeroOutput("inputs hit a projective root of the certificate")
    return out


def combine(cert: Certificate, xs) -> FieldElem:
    xs = list(xs)
    if not xs:
        raise BadParams("nothing to combine")
    acc = xs[-1]
    if acc.is_zero():
        raise ZeroInput("the combinator needs nonzero inputs")
    for x in reversed(xs[:-1]):
        acc = combine2(cert, x, acc)
    return acc


def selector(cert: Certificate, b: FieldElem) -> FieldElem:
    """Fixed ratio extracted when every input equals the same unit b."""
    den = cert.f.reversed_eval(b)
    if den.is_zero():
        raise RootHit("reversed certificate polynomial vanishes at b")
    return cert.f.lead / den


def combine_bounds(cert: Certificate, v: Locality, xs) -> dict:
    """Which side of properties (1) and (2) each hypothesis and conclusion
    lands on at v; diagnostic only, no exactness promises."""
    xs = list(xs)
    phi = combine(cert, xs)
    t = cert.t
    hyp1 = all(contains(v, x / t) for x in xs)
    concl1 = any(contains(v, phi / x) for x in xs)
    hyp2 = any(contains(v, x.inv()) for x in xs)
    concl2 = all(contains(v, x / phi) for x in xs)
    return {
        "phi": phi,
        "membership_hypothesis": hyp1,
        "membership_conclusion": concl1,
        "inverse_hypothesis": hyp2,
        "inverse_conclusion": concl2,
    }


def fold_property_report(cert: Certificate, S, xs) -> dict:
    """Check both fold properties of one input list at every locality in S.

    A violation means the certificate does not actually serve that locality
    (or a bug); for certified sets the violation list must stay empty.
    """
    checked = 0
    violations = []
    for v in S:
        r = combine_bounds(cert, v, xs)
        checked += 1
        if r["membership_hypothesis"] and not r["membership_conclusion"]:
            violations.append((v, "membership", r["phi"]))
        if r["inverse_hypothesis"] and not r["inverse_conclusion"]:
            violations.append((v, "inverse", r["phi"]))
    return {"checked": checked, "violations": violations}
