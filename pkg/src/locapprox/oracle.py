"""Brute-force search used to cross-check the constructive solvers.

The solvers in :mod:`locapprox.solver` build their answers; this module finds
answers (or certifies their absence up to a height bound) by sweeping a graded
enumeration of field elements and testing raw ball membership at every
constraint.  Nothing here shares code with the construction: candidates go
straight through the ring-membership predicates of :mod:`locapprox.localities`,
so a bug in the solver pipeline cannot vouch for itself.

Grading, per field:

* rationals: n/d in lowest terms has grade max(|n|, d).
* Gaussian rationals: (a+bi)/(c+di) with the denominator a canonical associate
  and unit gcd has grade max(|a|, |b|, |c|, |d|).
* rational functions: an integer polynomial gets the multiplicative measure
  mu(f) = prod_k (2*|c_k| + 2) over its coefficients c_0..c_deg, and a
  fraction n/d gets mu(n)*mu(d).  Every coefficient slot costs a factor of at
  least 2, so mu >= 4 * 2^deg: degrees stay logarithmic in the grade and
  coefficients stay below it, which keeps a full sweep to grade 10^3 cheap.

Within a grade the order is fixed (documented on each generator), so
``oracle_search`` is deterministic and "returns None at height H" is a
reproducible claim.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .elements import FieldElem, Q, QI, QT, q_elem, qi_elem, qt_elem
from .errors import BadParams
from .gaussian import canonical_associate, ggcd, gnorm
from .localities import contains, in_max_ideal
from .qpoly import QPoly

__all__ = ["enumerate_candidates", "oracle_search"]


def _q_candidates(height: int) -> Iterator[FieldElem]:
    # Grade ascending; within a grade, denominator ascending, numerator
    # ascending.  Zero is the unique grade-1 element with numerator 0.
    yield q_elem(0)
    for h in range(1, height + 1):
        for den in range(1, h + 1):
            if den < h:
                for num in (-h, h):
                    if gcd(h, den) == 1:
                        yield q_elem(Fraction(num, den))
            else:
                for num in range(-h, h + 1):
                    if num != 0 and gcd(abs(num), h) == 1:
                        yield q_elem(Fraction(num, h))


def _qi_candidates(height: int) -> Iterator[FieldElem]:
    # Grade ascending; within a grade, (c, d, a, b) ascending where the
    # candidate is (a+bi)/(c+di).  Denominators are canonical associates and
    # the Gaussian gcd of numerator and denominator must be a unit, so each
    # value appears exactly once.
    for h in range(1, height + 1):
        rng = range(-h, h + 1)
        for c in rng:
            for d in rng:
                if (c, d) == (0, 0) or canonical_associate((c, d)) != (c, d):
                    continue
                for a in rng:
                    for b in rng:
                        if max(abs(a), abs(b), abs(c), abs(d)) != h:
                            continue
                        if (a, b) == (0, 0):
                            if (c, d) != (1, 0):
                                continue
                        elif gnorm(ggcd((a, b), (c, d))) != 1:
                            continue
                        n = c * c + d * d
                        yield qi_elem(Fraction(a * c + b * d, n),
                                      Fraction(b * c - a * d, n))


def _int_polys(cap: int) -> list[tuple[int, tuple[int, ...]]]:
    """All nonzero integer polynomials with measure <= cap, as (mu, coeffs)."""
    out: list[tuple[int, tuple[int, ...]]] = []

    def extend(prefix: tuple[int, ...], mu: int) -> None:
        # prefix holds c_0..c_k; the next slot may close the polynomial
        # (nonzero leading coefficient) or stay open.
        top = cap // mu
        if top < 4:
            return
        cmax = (top - 2) // 2
        for ck in range(-cmax, cmax + 1):
            mu2 = mu * (2 * abs(ck) + 2)
            if ck != 0:
                out.append((mu2, prefix + (ck,)))
            extend(prefix + (ck,), mu2)

    extend((), 1)
    out.sort(key=lambda t: (t[0], len(t[1]), t[1]))
    return out


def _qt_candidates(height: int) -> Iterator[FieldElem]:
    # Total measure mu(num)*mu(den) ascending; ties by denominator measure,
    # then denominator coefficients, then numerator coefficients.  Pairs are
    # sign-normalised (positive leading denominator coefficient) and have
    # joint integer content 1; fractions that still share a polynomial factor
    # are swept twice, which costs time but not correctness.
    yield qt_elem(QPoly((0,)))
    polys = _int_polys(height)
    pairs: list[tuple[int, int, tuple[int, ...], tuple[int, ...]]] = []
    for mu_d, dc in polys:
        if dc[-1] < 0:
            continue
        for mu_n, nc in polys:
            if mu_n * mu_d > height:
                break
            if gcd(gcd(*map(abs, nc), 0), gcd(*map(abs, dc), 0)) != 1:
                continue
            pairs.append((mu_n * mu_d, mu_d, dc, nc))
    pairs.sort()
    for _, _, dc, nc in pairs:
        yield qt_elem(QPoly(nc), QPoly(dc))


def enumerate_candidates(field: str, height: int) -> Iterator[FieldElem]:
    """Graded candidate stream for ``field``, every grade up to ``height``."""
    if field == Q:
        return _q_candidates(height)
    if field == QI:
        return _qi_candidates(height)
    if field == QT:
        return _qt_candidates(height)
    raise BadParams(f"no candidate enumeration for field {field!r}")


def oracle_search(problem, height: int) -> Optional[FieldElem]:
    """First enumerated element satisfying every ball of ``problem``.

    Membership is checked directly against the locality predicates, with the
    same strictness rule the verifier applies: strict balls throughout in
    situation m, closed balls in situation o.  Returns ``None`` when the sweep
    up to ``height`` is exhausted, which for a complete grading is a proof
    that no solution of that grade or below exists.
    """
    strict = problem.situation == "m"
    checks = [(v, b.x, b.z) for b in problem.blocks for v in b.S]
    member = in_max_ideal if strict else contains
    for x in enumerate_candidates(problem.field, height):
        if all(member(v, (x - t) / z) for v, t, z in checks):
            return x
    return None
