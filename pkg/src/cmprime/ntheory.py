"""Small integer number-theory helpers shared across modules."""

from __future__ import annotations

from math import gcd, isqrt
from random import Random


def integer_nth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, by Newton on integers."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0, k >= 1")
    if n in (0, 1) or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def perfect_power(n: int) -> tuple[int, int] | None:
    """(m, e) with m**e == n, e >= 2 and m itself not a perfect power, or None."""
    if n < 4:
        return None
    for e in range(2, n.bit_length() + 1):
        m = integer_nth_root(n, e)
        if m < 2:
            break
        if m**e == n:
            deeper = perfect_power(m)
            if deeper is not None:
                return deeper[0], deeper[1] * e
            return m, e
    return None


def is_squarefree(n: int) -> bool:
    """True when no square of a prime divides n; sign is ignored."""
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i in range(limit + 1) if sieve[i]]


SMALL_PRIMES = _small_primes(1000)


def miller_rabin(n: int, rounds: int = 64, seed: int | None = None) -> tuple[bool, int | None]:
    """(True, None) if n passes `rounds` random-base tests, else (False, witness).

    Bases are drawn from a seeded stream so runs replay; n < 4 handled directly.
    """
    if n < 2:
        return False, None
    for p in (2, 3, 5, 7):
        if n == p:
            return True, None
        if n % p == 0:
            return False, p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    rng = Random(seed if seed is not None else 0x6D72)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False, a
    return True, None


def is_probable_prime(n: int) -> bool:
    return miller_rabin(n)[0]


def trial_division_factor(n: int, bound: int) -> int | None:
    """Smallest prime factor of n that is <= bound, or None; 2/3 wheel."""
    if n % 2 == 0:
        return 2 if n > 2 else None
    if n % 3 == 0:
        return 3 if n > 3 else None
    f = 5
    while f <= bound and f * f <= n:
        if n % f == 0:
            return f
        if n % (f + 2) == 0:
            return f + 2
        f += 6
    return None


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division; fine for the small k in play."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


def int_poly_resultant(f: list[int], g: list[int]) -> int:
    """Resultant of two integer polynomials (coefficients constant-first).

    Determinant of the Sylvester matrix by fraction-free Bareiss elimination,
    exact over Z; used for discriminants of small catalog polynomials, not in
    any modular hot path.
    """

    def deg(p: list[int]) -> int:
        d = len(p) - 1
        while d >= 0 and p[d] == 0:
            d -= 1
        return d

    m, n = deg(f), deg(g)
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    # rows: n shifts of f (descending coefficients), then m shifts of g
    fd = [f[m - i] for i in range(m + 1)]
    gd = [g[n - i] for i in range(n + 1)]
    mat = []
    for i in range(n):
        mat.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        mat.append([0] * i + gd + [0] * (size - n - 1 - i))
    sign = 1
    prev = 1
    for col in range(size - 1):
        if mat[col][col] == 0:
            for r in range(col + 1, size):
                if mat[r][col] != 0:
                    mat[col], mat[r] = mat[r], mat[col]
                    sign = -sign
                    break
            else:
                return 0
        pivot = mat[col][col]
        for r in range(col + 1, size):
            for c in range(col + 1, size):
                mat[r][c] = (mat[r][c] * pivot - mat[r][col] * mat[col][c]) // prev
            mat[r][col] = 0
        prev = pivot
    return sign * mat[size - 1][size - 1]


def int_poly_discriminant(f: list[int]) -> int:
    """disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f), integer polys, const-first."""
    d = len(f) - 1
    while d >= 0 and f[d] == 0:
        d -= 1
    if d < 1:
        raise ValueError("degree must be >= 1")
    fp = [i * f[i] for i in range(1, d + 1)]
    res = int_poly_resultant(f[: d + 1], fp)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    lc = f[d]
    assert res % lc == 0
    return sign * (res // lc)


def derive_seed(master: int, *indices: int) -> int:
    """Stable per-task seed: splitmix-style mix of master with each index in turn."""
    x = master & 0xFFFFFFFFFFFFFFFF
    for idx in indices:
        x = (x + 0x9E3779B97F4A7C15 + (idx & 0xFFFFFFFFFFFFFFFF)) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        x = z ^ (z >> 31)
    return x


def euler_nonresidue(n: int, rng: Random, tries: int = 64) -> int | None:
    """g with g^((n-1)/2) = -1 (mod n); None if none found in `tries` draws."""
    if n % 2 == 0 or n < 5:
        return None
    e = (n - 1) // 2
    for _ in range(tries):
        g = rng.randrange(2, n - 1)
        if gcd(g, n) != 1:
            continue
        if pow(g, e, n) == n - 1:
            return g
    return None
