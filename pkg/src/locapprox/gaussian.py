"""Gaussian integer arithmetic on plain (a, b) int pairs meaning a + bi.

Used for the gaussian-prime valuations and the Z[i] CRT inside the weak
approximation solver. Nothing here knows about FieldElem.
"""

from .errors import BadParams, DivisionByZero, IncompatibleModuli
from .intmath import is_prime, sqrt_minus_one_mod

GInt = tuple[int, int]


def gnorm(x: GInt) -> int:
    return x[0] * x[0] + x[1] * x[1]


def gadd(x: GInt, y: GInt) -> GInt:
    return (x[0] + y[0], x[1] + y[1])


def gsub(x: GInt, y: GInt) -> GInt:
    return (x[0] - y[0], x[1] - y[1])


def gmul(x: GInt, y: GInt) -> GInt:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def gconj(x: GInt) -> GInt:
    return (x[0], -x[1])


def gdivmod(x: GInt, y: GInt) -> tuple[GInt, GInt]:
    """Nearest-rounding division: x = q*y + r with N(r) <= N(y)/2."""
    n = gnorm(y)
    if n == 0:
        raise DivisionByZero("gaussian division by zero")
    num = gmul(x, gconj(y))

    def _round_div(a: int, b: int) -> int:
        # round half away from zero is fine; any nearest works
        return (2 * a + b) // (2 * b) if a >= 0 else -((2 * -a + b) // (2 * b))

    q = (_round_div(num[0], n), _round_div(num[1], n))
    r = gsub(x, gmul(q, y))
    return q, r


def gdiv_exact(x: GInt, y: GInt) -> GInt:
    q, r = gdivmod(x, y)
    if r != (0, 0):
        raise BadParams(f"{x} not divisible by {y}")
    return q


def ggcd(x: GInt, y: GInt) -> GInt:
    while y != (0, 0):
        _, r = gdivmod(x, y)
        x, y = y, r
    return canonical_associate(x)


def is_unit(x: GInt) -> bool:
    return gnorm(x) == 1


def canonical_associate(x: GInt) -> GInt:
    """The associate with a > 0, b >= 0 (zero stays zero)."""
    if x == (0, 0):
        return x
    for _ in range(4):
        if x[0] > 0 and x[1] >= 0:
            return x
        x = (-x[1], x[0])  # multiply by i
    raise AssertionError("unreachable")


def is_gaussian_prime(x: GInt) -> bool:
    n = gnorm(x)
    if n < 2:
        return False
    if is_prime(n):
        return True
    # inert case: associate of a rational prime q = 3 mod 4
    a, b = canonical_associate(x)
    return b == 0 and a % 4 == 3 and is_prime(a)


def gval(x: GInt, g: GInt) -> int:
    """Multiplicity of the prime g in x (x nonzero)."""
    if x == (0, 0):
        raise BadParams("valuation of zero")
    v = 0
    while True:
        q, r = gdivmod(x, g)
        if r != (0, 0):
            return v
        x = q
        v += 1


def gpow(x: GInt, n: int) -> GInt:
    out = (1, 0)
    while n:
        if n & 1:
            out = gmul(out, x)
        x = gmul(x, x)
        n >>= 1
    return out


def gmod(x: GInt, m: GInt) -> GInt:
    return gdivmod(x, m)[1]


def _ext_gcd(x: GInt, y: GInt) -> tuple[GInt, GInt, GInt]:
    """(g, u, v) with u*x + v*y = g."""
    r0, r1 = x, y
    s0, s1 = (1, 0), (0, 0)
    t0, t1 = (0, 0), (1, 0)
    while r1 != (0, 0):
        q, r = gdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, gsub(s0, gmul(q, s1))
        t0, t1 = t1, gsub(t0, gmul(q, t1))
    return r0, s0, t0


def ginv_mod(x: GInt, m: GInt) -> GInt:
    g, u, _ = _ext_gcd(x, m)
    if not is_unit(g):
        raise BadParams(f"{x} not invertible mod {m}")
    # g is a unit; fold it into u
    gi = {(1, 0): (1, 0), (-1, 0): (-1, 0), (0, 1): (0, -1), (0, -1): (0, 1)}[g]
    return gmod(gmul(u, gi), m)


def gcrt(pairs: list[tuple[GInt, GInt]]) -> tuple[GInt, GInt]:
    """Simultaneous congruences with pairwise coprime gaussian moduli."""
    r, m = (0, 0), (1, 0)
    for ri, mi in pairs:
        g, _, _ = _ext_gcd(m, mi)
        if not is_unit(g):
            raise IncompatibleModuli(f"moduli {m} and {mi} share a factor")
        # x = r + m * k with k = (ri - r) / m mod mi
        k = gmod(gmul(gsub(ri, r), ginv_mod(m, mi)), mi)
        r = gadd(r, gmul(m, k))
        m = gmul(m, mi)
        r = gmod(r, m)
    return r, m


def split_rational_prime(p: int) -> GInt:
    """A gaussian prime above p, canonical associate.

    p = 2 gives 1+i, p = 1 mod 4 a split prime, p = 3 mod 4 the inert p itself.
    """
    if not is_prime(p):
        raise BadParams(f"{p} is not prime")
    if p == 2:
        return (1, 1)
    if p % 4 == 3:
        return (p, 0)
    x = sqrt_minus_one_mod(p)
    return canonical_associate(ggcd((p, 0), (x, 1)))


def residue_char(g: GInt) -> int:
    """The rational prime under the gaussian prime g."""
    n = gnorm(g)
    if is_prime(n):
        return n
    a, b = canonical_associate(g)
    if b == 0 and is_prime(a):
        return a
    raise BadParams(f"{g} is not a gaussian prime")
