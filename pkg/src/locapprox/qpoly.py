"""Dense univariate polynomials over the rationals.

Coefficients are Fractions stored in ascending order with no trailing zeros.
Instances are treated as immutable and are hashable, so a polynomial can be
part of a locality's identity. Includes the real-root machinery (Sturm chains,
Yun's squarefree decomposition, sign analysis on intervals) and rational
irreducibility testing up to degree six.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from .errors import BadParams, DegreeCapExceeded, DivisionByZero


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise BadParams(f"not a rational coefficient: {x!r}")


class QPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def const(c) -> "QPoly":
        return QPoly((_frac(c),))

    @staticmethod
    def monomial(c, n: int) -> "QPoly":
        if n < 0:
            raise BadParams("monomial degree must be >= 0")
        return QPoly((0,) * n + (_frac(c),))

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise BadParams("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("QPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"QPoly({qpoly_str(self, 'X')})"

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if not self.coeffs or not other.coeffs:
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    def scale(self, c) -> "QPoly":
        c = _frac(c)
        return QPoly(tuple(a * c for a in self.coeffs))

    def __pow__(self, n: int) -> "QPoly":
        if n < 0:
            raise BadParams("negative polynomial power")
        result = QPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lc = other.lead
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i] == 0:
                continue
            factor = rem[i] / lc
            q[i - d] = factor
            for j, c in enumerate(other.coeffs):
                rem[i - d + j] -= factor * c
        return QPoly(q), QPoly(rem)

    def __floordiv__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[1]

    def divides(self, other: "QPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def derivative(self) -> "QPoly":
        return QPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, a) -> "QPoly":
        """p(X + a), by Horner with polynomial accumulator."""
        a = _frac(a)
        xa = QPoly((a, 1))
        acc = QPoly()
        for c in reversed(self.coeffs):
            acc = acc * xa + QPoly.const(c)
        return acc

    def reversed_coeffs(self) -> "QPoly":
        """X^deg * p(1/X). Drops the information about roots at zero."""
        return QPoly(tuple(reversed(self.coeffs)))


QP_ZERO = QPoly()
QP_ONE = QPoly((1,))
QP_X = QPoly((0, 1))


def _int_primitive(p: QPoly) -> list[int]:
    """Integer coefficients of p with content removed, low to high."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _pseudo_mod(a: list[int], b: list[int]) -> list[int]:
    """Remainder of lc(b)^k * a by b over the integers, content removed."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        c = r.pop()
        r = [lb * x for x in r]
        for i in range(db):
            r[len(r) - db + i] -= c * b[i]
        while r and r[-1] == 0:
            r.pop()
    g = 0
    for c in r:
        g = gcd(g, c)
    return [c // g for c in r] if g else []


_WORD_PRIME = (1 << 61) - 1


def _coprime_mod_p(fa: list[int], fb: list[int]) -> bool:
    """True when gcd(fa, fb) mod a word-size prime is constant.

    deg(gcd mod p) bounds deg(gcd) from above whenever neither leading
    coefficient vanishes mod p, so a constant answer here is conclusive and
    skips the integer remainder sequence entirely.
    """
    p = _WORD_PRIME
    a = [c % p for c in fa]
    b = [c % p for c in fb]
    if a[-1] == 0 or b[-1] == 0:
        return False
    while True:
        if len(b) == 1:
            return b[0] != 0
        inv = pow(b[-1], -1, p)
        bm = [c * inv % p for c in b]
        r = list(a)
        while len(r) >= len(bm):
            c = r.pop()
            if c:
                off = len(r) - len(bm) + 1
                for i in range(len(bm) - 1):
                    r[off + i] = (r[off + i] - c * bm[i]) % p
            while r and r[-1] == 0:
                r.pop()
        if not r:
            return False
        a, b = bm, r


def qpoly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd (zero if both inputs are zero).

    Runs a primitive pseudo-remainder sequence on integer coefficient lists;
    plain fraction Euclid grows coefficients exponentially and dominates the
    cost of canonicalising rational functions.  Coprime pairs, the common
    case, are dispatched by a single modular Euclid pass first.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return QP_ONE
    fa, fb = _int_primitive(a), _int_primitive(b)
    if len(fa) < len(fb):
        fa, fb = fb, fa
    if _coprime_mod_p(fa, fb):
        return QP_ONE
    while fb:
        fa, fb = fb, _pseudo_mod(fa, fb)
    return QPoly(fa).monic()


def qpoly_lcm(a: QPoly, b: QPoly) -> QPoly:
    if a.is_zero() or b.is_zero():
        return QPoly()
    g = qpoly_gcd(a, b)
    return ((a * b) // g).monic()


def qpoly_ext_gcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """(g, s, t) with s*a + t*b = g, g the monic gcd."""
    r0, r1 = a, b
    s0, s1 = QPoly.const(1), QPoly()
    t0, t1 = QPoly(), QPoly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lead
    inv = QPoly.const(Fraction(1) / lc)
    return r0.monic(), s0 * inv, t0 * inv


def qpoly_inv_mod(a: QPoly, m: QPoly) -> QPoly:
    """Inverse of a modulo m; a and m must be coprime."""
    g, s, _ = qpoly_ext_gcd(a % m, m)
    if g.degree != 0:
        raise BadParams("polynomial is not invertible modulo the given modulus")
    return s % m


def yun_squarefree(p: QPoly) -> list[tuple[QPoly, int]]:
    """Squarefree decomposition: p = lc * prod f_i^i with the f_i monic,
    squarefree and pairwise coprime. Returns [(f_i, i)] for deg f_i >= 1."""
    if p.is_const():
        return []
    p = p.monic()
    dp = p.derivative()
    a = qpoly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = qpoly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
            b = b // g
            c = d // g
        else:
            c = d
        d = c - b.derivative()
        i += 1
    return out


def odd_even_split(p: QPoly) -> tuple[Fraction, QPoly, QPoly]:
    """Write p = c * odd * sq^2 with odd the (monic, squarefree) product of the
    odd-multiplicity irreducible factors. Sign questions reduce to c * odd."""
    if p.is_zero():
        raise BadParams("zero polynomial has no factor split")
    c = p.lead
    odd = QP_ONE
    sq = QP_ONE
    for f, m in yun_squarefree(p):
        if m % 2 == 1:
            odd = odd * f
        sq = sq * f ** (m // 2)
    return c, odd, sq


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(p: QPoly) -> list[QPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _sign_at(p: QPoly, x) -> int:
    # x may be +inf / -inf, encoded as the strings "+inf" / "-inf"
    if x == "+inf":
        return 0 if p.is_zero() else _sign(p.lead)
    if x == "-inf":
        if p.is_zero():
            return 0
        return _sign(p.lead) * (1 if p.degree % 2 == 0 else -1)
    return _sign(p(x))


def _variations(chain, x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: QPoly, a, b) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b].

    Endpoints may be "-inf"/"+inf". p need not be squarefree; the count is of
    distinct roots of its squarefree part.
    """
    if p.is_zero():
        raise BadParams("root count of the zero polynomial")
    _, odd, sq = odd_even_split(p)
    sf = (odd * sq).monic() if (odd * sq).degree > 0 else QP_ONE
    if sf.degree <= 0:
        return 0
    chain = sturm_chain(sf)
    return _variations(chain, a) - _variations(chain, b)


def count_real_roots(p: QPoly) -> int:
    return sturm_count(p, "-inf", "+inf")


def sturm_nonneg(p: QPoly, lo=None, hi=None) -> bool:
    """Exact test for p(x) >= 0 on [lo, hi] (None meaning the whole line)."""
    if p.is_zero():
        return True
    if p.is_const():
        return p.coeffs[0] >= 0
    a = "-inf" if lo is None else _frac(lo)
    b = "+inf" if hi is None else _frac(hi)
    if a != "-inf" and b != "+inf" and a == b:
        return p(a) >= 0
    c, odd, _ = odd_even_split(p)
    if odd.degree <= 0:
        # p is c * square; sign is the sign of c away from isolated zeros
        return c > 0
    # sign can only change at roots of the odd part, which are all simple;
    # any such root strictly inside the interval forces negative values
    interior = sturm_count(odd, a, b)
    if b != "+inf" and odd(b) == 0:
        interior -= 1
    if interior > 0:
        return False
    # constant sign on the interior: sample a point that is not a root
    if a != "-inf" and _sign_at(odd, a) != 0:
        return c * odd(a) > 0
    if b != "+inf" and _sign_at(odd, b) != 0:
        return c * odd(b) > 0
    if a == "-inf" and b == "+inf":
        return c * odd(0) > 0  # no real roots at all, so 0 is a safe sample
    if a == "-inf":
        m = b - 1 - _root_bound(odd)  # roots only at b; go far left
        return c * odd(m) > 0
    if b == "+inf":
        m = a + 1 + _root_bound(odd)
        return c * odd(m) > 0
    return c * odd((a + b) / 2) > 0


def _root_bound(p: QPoly) -> Fraction:
    """Cauchy bound: all real roots lie in [-B, B]."""
    lc = abs(p.lead)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def find_negative_point(p: QPoly, lo, hi, max_grid: int = 1 << 16):
    """A rational x in [lo, hi] with p(x) < 0, or None if the grid search
    never sees one. Only used to produce concrete witnesses after sturm_nonneg
    already said the polynomial dips negative."""
    lo, hi = _frac(lo), _frac(hi)
    n = 8
    while n <= max_grid:
        step = (hi - lo) / n
        for k in range(n + 1):
            x = lo + step * k
            if p(x) < 0:
                return x
        n *= 4
    return None


# -- irreducibility over Q (degree cap 6) ------------------------------------


def _int_primitive(p: QPoly) -> list[int]:
    """Primitive integer coefficient vector with positive leading entry."""
    from math import gcd, lcm

    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    out.sort()
    return out


def _has_rational_root(ints: list[int]) -> bool:
    if ints[0] == 0:
        return True  # X divides
    for p in _int_divisors(ints[0]):
        for q in _int_divisors(ints[-1]):
            for num in (p, -p):
                num_f = Fraction(num, q)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * num_f + c
                if acc == 0:
                    return True
    return False


def _lagrange(points: list[int], values: list[Fraction]) -> QPoly:
    acc = QPoly()
    for i, (xi, yi) in enumerate(zip(points, values)):
        term = QPoly.const(yi)
        for j, xj in enumerate(points):
            if i == j:
                continue
            term = term * QPoly((Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        acc = acc + term
    return acc


def has_rational_root(p: QPoly) -> bool:
    """Whether a nonconstant rational polynomial has a root in Q."""
    if p.degree < 1:
        raise BadParams("root test needs degree >= 1")
    return _has_rational_root(_int_primitive(p))


def irreducible_q(p: QPoly, cap: int = 6) -> bool:
    """Irreducibility over Q for 1 <= deg <= cap (default and spec cap: 6).

    Degrees 2 and 3 reduce to the rational root test; degrees 4..6 rule out
    quadratic and cubic factors by Kronecker interpolation through integer
    points, normalising the first divisor positive to kill the sign symmetry.
    """
    d = p.degree
    if d < 1:
        raise BadParams("irreducibility needs degree >= 1")
    if d > cap:
        raise DegreeCapExceeded(f"degree {d} above cap {cap}")
    if d == 1:
        return True
    ints = _int_primitive(p)
    if _has_rational_root(ints):
        return False
    if d <= 3:
        return True
    zp = QPoly(ints)
    for k in range(2, d // 2 + 1):
        points: list[int] = []
        values: list[Fraction] = []
        x = 0
        while len(points) < k + 1:
            for cand in ((x, -x) if x else (0,)):
                if cand in points:
                    continue
                v = zp(cand)
                if v != 0:
                    points.append(cand)
                    values.append(v)
                if len(points) == k + 1:
                    break
            x += 1
        div_sets = []
        for i, v in enumerate(values):
            ds = _int_divisors(int(v))
            if i == 0:
                div_sets.append([Fraction(t) for t in ds])
            else:
                div_sets.append([Fraction(s * t) for t in ds for s in (1, -1)])
        for combo in product(*div_sets):
            g = _lagrange(points, list(combo))
            if g.degree < 1:
                continue
            if any(c.denominator != 1 for c in g.coeffs):
                continue
            if g.divides(zp):
                return False
    return True


# -- pretty printing ---------------------------------------------------------


def qpoly_str(p: QPoly, var: str = "T") -> str:
    """Canonical string, descending powers, explicit '*', e.g. '2*T^2-T+1/2'."""
    if p.is_zero():
        return "0"
    parts = []
    for n in range(p.degree, -1, -1):
        c = p.coeff(n)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if n == 0:
            body = str(mag)
        else:
            xpow = var if n == 1 else f"{var}^{n}"
            body = xpow if mag == 1 else f"{mag}*{xpow}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out
