"""Dense polynomial arithmetic over prime fields.

Coefficient lists are ascending ints reduced mod p. Only what the
certificate machinery needs: products, remainders, gcds, the Frobenius
power Y^(p^k) mod g, distinct factor degrees, and root detection in
extension fields F_{p^f} via gcd with Y^(p^f) - Y.
"""

from __future__ import annotations

from .intmath import inv_mod


def pnorm(c, p):
    c = [int(x) % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return c


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return pnorm(out, p)


def pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = inv_mod(m[-1], p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - q * y) % p
        a.pop()
    return pnorm(a, p)


def pgcd(a, b, p):
    a, b = pnorm(a, p), pnorm(b, p)
    while b:
        a, b = b, pmod(a, b, p)
    if a:
        inv = inv_mod(a[-1], p)
        a = [x * inv % p for x in a]
    return a


def pderiv(a, p):
    return pnorm([i * c for i, c in enumerate(a)][1:], p)


def frobenius_power(k: int, m, p):
    """Y^(p^k) mod m, by binary powering on the exponent."""
    n = p**k
    if len(m) - 1 <= 1:
        # r^(p^k) = r for the residue r of Y mod a linear modulus
        return pmod([0, 1], m, p)
    result = [1]
    base = [0, 1]
    while n:
        if n & 1:
            result = pmod(pmul(result, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        n >>= 1
    return result


def has_root_in_ext(g, p, f: int) -> bool:
    """Does g mod p have a root in F_{p^f}? Zero polynomial counts as yes."""
    gg = pnorm(g, p)
    if not gg:
        return True
    if len(gg) == 1:
        return False
    w = frobenius_power(f, gg, p)
    # gcd(Y^(p^f) - Y, g) is nonconstant exactly when roots exist
    diff = pnorm([(c - (1 if i == 1 else 0)) % p for i, c in enumerate(w + [0, 0])], p)
    return len(pgcd(diff, gg, p)) > 1


def factor_degrees(h, p):
    """Degrees of the irreducible factors of h mod p, or None when the
    reduction drops degree or is not squarefree."""
    hh = pnorm(h, p)
    if len(hh) != len(h):
        return None
    if len(pgcd(hh, pderiv(hh, p), p)) > 1:
        return None
    inv = inv_mod(hh[-1], p)
    hh = [c * inv % p for c in hh]
    degs = []
    w = [0, 1]
    k = 0
    while len(hh) > 1:
        k += 1
        if 2 * k > len(hh) - 1:
            degs.append(len(hh) - 1)
            break
        w = pmod(frobenius_power(1, hh, p) if k == 1 else _pow_frob(w, hh, p), hh, p)
        diff = pnorm([(c - (1 if i == 1 else 0)) % p for i, c in enumerate(w + [0, 0])], p)
        d = pgcd(diff, hh, p)
        if len(d) > 1:
            degs.extend([k] * ((len(d) - 1) // k))
            hh = _pdiv_exact(hh, d, p)
            w = pmod(w, hh, p)
    return degs


def _pow_frob(w, m, p):
    # w(Y) -> w(Y)^p mod m, one more Frobenius step
    res = [1]
    base = list(w)
    n = p
    while n:
        if n & 1:
            res = pmod(pmul(res, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        n >>= 1
    return res


def _pdiv_exact(a, b, p):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    inv = inv_mod(b[-1], p)
    while len(a) >= len(b) and a:
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * inv % p
        shift = len(a) - len(b)
        out[shift] = q
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - q * y) % p
        a.pop()
    return pnorm(out, p)
