"""Exact arithmetic in imaginary quadratic orders Z[sqrt(d)] and Z[(1+sqrt(d))/2].

Elements are (num_a + num_b*sqrt(d))/2**half with d < 0 squarefree.  The
half-integer form only exists for d = 1 (mod 4), where the maximal order
contains (1+sqrt(d))/2.  All operations are exact; nothing here reduces mod N.

The local side: a split odd prime q = norm(iota) gives a ring isomorphism
O_K/(iota)^n = Z/q^n sending sqrt(d) to a lifted square root s of d.  That
projection, the lifted root itself, and Hensel lifting of k-th roots of unity
live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class DoesNotSplit(ValueError):
    """d is not a quadratic residue mod q, so q has no degree-one prime above it."""


class QuadInt:
    """An element of the maximal order of Q(sqrt(d)), d < 0."""

    __slots__ = ("num_a", "num_b", "d", "half")

    def __init__(self, num_a: int, num_b: int, d: int, half: bool = False):
        if d >= 0:
            raise ValueError("d must be negative")
        if half:
            if d % 4 != 1:
                raise ValueError("half-integer coordinates need d = 1 (mod 4)")
            if (num_a - num_b) % 2 != 0:
                raise ValueError("half-integer coordinates need num_a = num_b (mod 2)")
            if num_a % 2 == 0:  # both even: reduce to integral form
                num_a //= 2
                num_b //= 2
                half = False
        self.num_a = num_a
        self.num_b = num_b
        self.d = d
        self.half = half

    @classmethod
    def of_int(cls, n: int, d: int) -> "QuadInt":
        return cls(n, 0, d)

    @classmethod
    def _from_doubled(cls, A: int, B: int, d: int) -> "QuadInt":
        # value is (A + B*sqrt(d))/2 with A = B (mod 2)
        if (A - B) % 2 != 0:
            raise ValueError("inconsistent doubled coordinates")
        if A % 2 == 0:
            return cls(A // 2, B // 2, d)
        return cls(A, B, d, half=True)

    def _doubled(self) -> tuple[int, int]:
        if self.half:
            return self.num_a, self.num_b
        return 2 * self.num_a, 2 * self.num_b

    def _check(self, other: "QuadInt") -> None:
        if self.d != other.d:
            raise ValueError("mixed quadratic fields: d=%d vs d=%d" % (self.d, other.d))

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        a1, b1 = self._doubled()
        a2, b2 = other._doubled()
        return QuadInt._from_doubled(a1 + a2, b1 + b2, self.d)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        a1, b1 = self._doubled()
        a2, b2 = other._doubled()
        return QuadInt._from_doubled(a1 - a2, b1 - b2, self.d)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.num_a, -self.num_b, self.d, self.half)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        a1, b1 = self._doubled()
        a2, b2 = other._doubled()
        # (a1+b1 w)(a2+b2 w)/4 with w^2 = d; halves stay in the order
        A = a1 * a2 + self.d * b1 * b2
        B = a1 * b2 + b1 * a2
        assert A % 2 == 0 and B % 2 == 0
        return QuadInt._from_doubled(A // 2, B // 2, self.d)

    def __pow__(self, e: int) -> "QuadInt":
        if e < 0:
            raise ValueError("negative exponent")
        result = QuadInt.of_int(1, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "QuadInt":
        return QuadInt(self.num_a, -self.num_b, self.d, self.half)

    def norm(self) -> int:
        A, B = self._doubled()
        n4 = A * A - self.d * B * B
        assert n4 % 4 == 0
        return n4 // 4

    def trace(self) -> int:
        A, _ = self._doubled()
        return A

    def is_zero(self) -> bool:
        return self.num_a == 0 and self.num_b == 0

    def is_one(self) -> bool:
        return not self.half and self.num_a == 1 and self.num_b == 0

    def divexact(self, other: "QuadInt") -> "QuadInt | None":
        """self/other when it lies in the order, else None."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero element")
        w = self * other.conjugate()
        n = other.norm()
        A, B = w._doubled()
        if A % n != 0 or B % n != 0:
            return None
        try:
            q = QuadInt._from_doubled(A // n, B // n, self.d)
        except ValueError:
            return None
        assert (q * other) == self
        return q

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadInt):
            return NotImplemented
        return (self.d == other.d and self._doubled() == other._doubled())

    def __hash__(self) -> int:
        return hash((self.d,) + self._doubled())

    def __repr__(self) -> str:
        if self.half:
            return f"QuadInt({self.num_a}, {self.num_b}, d={self.d}, half=True)"
        return f"QuadInt({self.num_a}, {self.num_b}, d={self.d})"

    def __str__(self) -> str:
        core = f"{self.num_a}" if self.num_b == 0 else (
            f"{self.num_a}{'+' if self.num_b >= 0 else '-'}{abs(self.num_b)}*sqrt({self.d})")
        return f"({core})/2" if self.half else core


def sqrt_mod_prime(d: int, q: int) -> int:
    """Tonelli-Shanks: a root of x^2 = d (mod q) for odd prime q, or DoesNotSplit."""
    a = d % q
    if a == 0:
        raise DoesNotSplit(f"q={q} divides d={d} (ramified)")
    if pow(a, (q - 1) // 2, q) != 1:
        raise DoesNotSplit(f"d={d} is a non-residue mod q={q}")
    if q % 4 == 3:
        return pow(a, (q + 1) // 4, q)
    # general case
    m = q - 1
    sigma = 0
    while m % 2 == 0:
        sigma += 1
        m //= 2
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    c = pow(z, m, q)
    t = pow(a, m, q)
    r = pow(a, (m + 1) // 2, q)
    big = sigma
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (big - i - 1), q)
        r = r * b % q
        c = b * b % q
        t = t * c % q
        big = i
    return r


def sqrt_mod_prime_power(d: int, q: int, n: int) -> int:
    """Canonical root of x^2 = d (mod q^n): the one in [0, q^n / 2)."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    s = sqrt_mod_prime(d, q)
    e = 1
    while e < n:
        e = min(2 * e, n)
        mod = q**e
        # Newton: s <- s - (s^2 - d)/(2s)
        s = (s - (s * s - d) * pow(2 * s, -1, mod)) % mod
    mod = q**n
    return min(s, mod - s)


@dataclass(frozen=True)
class LocalContext:
    """O_K/(iota)^n = Z/q^n for a fixed degree-one prime element iota of norm q.

    s satisfies s^2 = d (mod q^n) and iota projects to 0, which pins which of
    the two conjugate primes above q the context belongs to.
    """

    d: int
    q: int
    exponent: int
    s: int

    @property
    def modulus(self) -> int:
        return self.q**self.exponent

    @classmethod
    def for_element(cls, iota: QuadInt, exponent: int) -> "LocalContext":
        q = iota.norm()
        if q % 2 == 0:
            raise ValueError("norm(iota) must be odd")
        if gcd(2 * iota.d, q) != 1:
            raise DoesNotSplit("q shares a factor with 2d")
        s = sqrt_mod_prime_power(iota.d, q, exponent)
        mod = q**exponent
        A, B = iota._doubled()
        if (A + B * s) * pow(2, -1, mod) % q != 0:
            s = mod - s
        ctx = cls(iota.d, q, exponent, s)
        assert ctx.project(iota) % q == 0
        return ctx

    def project(self, x: QuadInt) -> int:
        """Ring map to Z/q^n; kernel is exactly (iota)^n."""
        if x.d != self.d:
            raise ValueError("element from a different field")
        mod = self.modulus
        A, B = x._doubled()
        return (A + B * self.s) * pow(2, -1, mod) % mod

    def at_level(self, exponent: int) -> "LocalContext":
        """The same prime's context at a lower precision."""
        if exponent > self.exponent:
            raise ValueError("cannot raise precision without relifting")
        return LocalContext(self.d, self.q, exponent, self.s % self.q**exponent)


def multiplicative_order(b: int, q: int, bound: int = 1 << 20) -> int:
    """Order of b mod q by direct iteration; intended for small moduli."""
    b %= q
    if b == 0 or gcd(b, q) != 1:
        raise ValueError("b not a unit")
    acc = b
    for m in range(1, bound + 1):
        if acc == 1:
            return m
        acc = acc * b % q
    raise ValueError("order exceeds bound")


def hensel_root_of_unity(k: int, q: int, n: int, b_seed: int) -> int:
    """The k-th root of unity mod q^n that reduces to b_seed mod q.

    b_seed's order mod q must divide k (callers that need exact order k enforce
    it themselves); the lift is unique and computed by Newton iteration on
    b^k - 1 at doubling precision.  k must be a unit mod q.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k % q == 0:
        raise ValueError("k must be a unit mod q")
    b = b_seed % q
    if pow(b, k, q) != 1:
        raise ValueError(f"b_seed={b_seed} is not a k-th root of unity mod {q}")
    e = 1
    while e < n:
        e = min(2 * e, n)
        mod = q**e
        f = (pow(b, k, mod) - 1) % mod
        fprime = k * pow(b, k - 1, mod) % mod
        b = (b - f * pow(fprime, -1, mod)) % mod
    assert pow(b, k, q**n) == 1
    return b
