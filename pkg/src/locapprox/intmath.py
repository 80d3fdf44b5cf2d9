"""Integer number theory helpers: primality, CRT, quadratic residues, factoring."""

from math import gcd

from .errors import BadParams, IncompatibleModuli

# enough deterministic bases for anything below 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = max(n + 1, 2)
    while not is_prime(k):
        k += 1
    return k


def primes_from(start: int = 2):
    p = start if is_prime(start) else next_prime(start - 1 if start > 2 else 1)
    while True:
        yield p
        p = next_prime(p)


def inv_mod(a: int, m: int) -> int:
    try:
        return pow(a, -1, m)
    except ValueError:
        raise BadParams(f"{a} not invertible mod {m}") from None


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Solve x = r1 (m1), x = r2 (m2). Moduli need not be coprime."""
    g = gcd(m1, m2)
    if (r2 - r1) % g != 0:
        raise IncompatibleModuli(f"no solution: {r1} mod {m1} vs {r2} mod {m2}")
    lcm = m1 // g * m2
    step = inv_mod(m1 // g, m2 // g) if m2 // g > 1 else 0
    k = ((r2 - r1) // g * step) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % lcm, lcm


def crt_list(pairs) -> tuple[int, int]:
    """Fold crt_pair over (residue, modulus) pairs. Empty input gives (0, 1)."""
    r, m = 0, 1
    for ri, mi in pairs:
        if mi <= 0:
            raise BadParams("modulus must be positive")
        r, m = crt_pair(r, m, ri % mi, mi)
    return r, m


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod an odd prime p."""
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise BadParams(f"{p} has no non-residue; not an odd prime?")


def sqrt_minus_one_mod(p: int) -> int:
    if p % 4 != 1:
        raise BadParams(f"-1 is not a square mod {p}")
    n = least_nonresidue(p)
    return pow(n, (p - 1) // 4, p)


def factorint(n: int) -> dict[int, int]:
    """Factor a positive integer by trial division (inputs here stay modest)."""
    if n <= 0:
        raise BadParams("factorint needs a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def int_nth_root(n: int, k: int) -> int:
    """Floor of the k-th root."""
    if n < 0 or k < 1:
        raise BadParams("bad root arguments")
    if n in (0, 1):
        return n
    x = int(round(n ** (1.0 / k)))
    while x > 0 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x
