"""Dense arithmetic in ((Z/N)[t]/(g_H))[x]/(x^k - a).

The base level models the ring of integers of the field of definition of a CM
curve reduced mod N (g_H monic of degree 2h); the extension level adjoins a
k-th root of a.  N may be composite: every inversion routes through a gcd with
N, and a proper divisor encountered anywhere is surfaced as FactorFound, the
ECM trick.  A gcd of N itself (zero divisor in every component) raises
NotInvertible instead; the two signals drive very different verdicts upstream.

Elements are plain tuples: base = D ints in [0, N), ext = k base tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


class FactorFound(ArithmeticError):
    """A proper divisor of N surfaced from a failed inversion."""

    def __init__(self, factor: int):
        super().__init__(f"proper factor {factor}")
        self.factor = factor


class NotInvertible(ArithmeticError):
    """gcd with N came out as N itself: zero divisor in every residue component."""


BaseElem = tuple  # D ints
ExtElem = tuple  # k BaseElems


@dataclass(frozen=True)
class TowerContext:
    n_value: int
    g: tuple  # monic, constant term first, degree D
    k: int
    a: int
    degree: int = field(init=False)

    def __post_init__(self):
        if self.n_value < 2:
            raise ValueError("modulus must be >= 2")
        if len(self.g) < 2 or self.g[-1] != 1:
            raise ValueError("g must be monic of degree >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        object.__setattr__(self, "g", tuple(c % self.n_value for c in self.g[:-1]) + (1,))
        object.__setattr__(self, "a", self.a % self.n_value)
        object.__setattr__(self, "degree", len(self.g) - 1)

    # ----- base ring (Z/N)[t]/(g) -----

    def base_zero(self) -> BaseElem:
        return (0,) * self.degree

    def base_one(self) -> BaseElem:
        return (1,) + (0,) * (self.degree - 1)

    def base_from_int(self, c: int) -> BaseElem:
        return (c % self.n_value,) + (0,) * (self.degree - 1)

    def base_from_coeffs(self, coeffs) -> BaseElem:
        cs = [c % self.n_value for c in coeffs]
        if len(cs) > self.degree:
            raise ValueError("too many coefficients")
        return tuple(cs) + (0,) * (self.degree - len(cs))

    def base_add(self, u: BaseElem, v: BaseElem) -> BaseElem:
        N = self.n_value
        return tuple((a + b) % N for a, b in zip(u, v))

    def base_sub(self, u: BaseElem, v: BaseElem) -> BaseElem:
        N = self.n_value
        return tuple((a - b) % N for a, b in zip(u, v))

    def base_neg(self, u: BaseElem) -> BaseElem:
        N = self.n_value
        return tuple(-a % N for a in u)

    def base_is_zero(self, u: BaseElem) -> bool:
        return all(a == 0 for a in u)

    def base_mul_int(self, u: BaseElem, c: int) -> BaseElem:
        N = self.n_value
        c %= N
        return tuple(a * c % N for a in u)

    def base_mul(self, u: BaseElem, v: BaseElem) -> BaseElem:
        N = self.n_value
        D = self.degree
        if D == 1:
            return (u[0] * v[0] % N,)
        if D == 2:
            g0, g1 = self.g[0], self.g[1]
            p2 = u[1] * v[1]
            c0 = (u[0] * v[0] - g0 * p2) % N
            c1 = (u[0] * v[1] + u[1] * v[0] - g1 * p2) % N
            return (c0, c1)
        # schoolbook then reduce by the monic g
        prod = [0] * (2 * D - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    prod[i + j] += a * b
        for idx in range(2 * D - 2, D - 1, -1):
            lead = prod[idx] % N
            if lead:
                base = idx - D
                for j in range(D):
                    prod[base + j] -= lead * self.g[j]
            prod[idx] = 0
        return tuple(c % N for c in prod[:D])

    def base_pow(self, u: BaseElem, e: int) -> BaseElem:
        result = self.base_one()
        while e:
            if e & 1:
                result = self.base_mul(result, u)
            u = self.base_mul(u, u)
            e >>= 1
        return result

    def base_norm(self, u: BaseElem) -> int:
        """Res_t(g, u) mod N = product of u over the roots of g (g monic)."""
        N = self.n_value
        D = self.degree
        if D == 1:
            return u[0] % N
        if D == 2:
            g0, g1 = self.g[0], self.g[1]
            return (u[0] * u[0] - g1 * u[0] * u[1] + g0 * u[1] * u[1]) % N
        # determinant of the multiplication-by-u matrix, Berkowitz (division-free)
        cols = []
        cur = u
        cols.append(cur)
        for _ in range(D - 1):
            # multiply by t
            shifted = [0] + list(cur[:-1])
            lead = cur[-1]
            if lead:
                for j in range(D):
                    shifted[j] = (shifted[j] - lead * self.g[j]) % N
            cur = tuple(c % N for c in shifted)
            cols.append(cur)
        mat = [[cols[j][i] % N for j in range(D)] for i in range(D)]
        return _det_berkowitz(mat, N)

    def base_inv(self, u: BaseElem) -> BaseElem:
        """Inverse in (Z/N)[t]/(g); FactorFound/NotInvertible on gcd structure."""
        N = self.n_value
        nrm = self.base_norm(u)
        g = gcd(nrm, N)
        if g == N:
            raise NotInvertible("norm divisible by modulus")
        if g != 1:
            raise FactorFound(g)
        D = self.degree
        if D == 1:
            return (pow(u[0], -1, N),)
        if D == 2:
            ninv = pow(nrm, -1, N)
            g1 = self.g[1]
            return ((u[0] - g1 * u[1]) * ninv % N, -u[1] * ninv % N)
        inv = _poly_invert(list(u), list(self.g), _IntCoeffOps(N))
        return tuple(inv) + (0,) * (D - len(inv))

    # ----- extension ring base[x]/(x^k - a) -----

    def ext_zero(self) -> ExtElem:
        return (self.base_zero(),) * self.k

    def ext_one(self) -> ExtElem:
        return (self.base_one(),) + (self.base_zero(),) * (self.k - 1)

    def ext_from_base(self, u: BaseElem) -> ExtElem:
        return (u,) + (self.base_zero(),) * (self.k - 1)

    def ext_from_int(self, c: int) -> ExtElem:
        return self.ext_from_base(self.base_from_int(c))

    def ext_add(self, u: ExtElem, v: ExtElem) -> ExtElem:
        return tuple(self.base_add(a, b) for a, b in zip(u, v))

    def ext_sub(self, u: ExtElem, v: ExtElem) -> ExtElem:
        return tuple(self.base_sub(a, b) for a, b in zip(u, v))

    def ext_neg(self, u: ExtElem) -> ExtElem:
        return tuple(self.base_neg(a) for a in u)

    def ext_is_zero(self, u: ExtElem) -> bool:
        return all(self.base_is_zero(a) for a in u)

    def ext_mul_int(self, u: ExtElem, c: int) -> ExtElem:
        return tuple(self.base_mul_int(a, c) for a in u)

    def ext_mul(self, u: ExtElem, v: ExtElem) -> ExtElem:
        k = self.k
        if k == 1:
            return (self.base_mul(u[0], v[0]),)
        zero = self.base_zero()
        prod = [zero] * (2 * k - 1)
        for i, a in enumerate(u):
            if not self.base_is_zero(a):
                for j, b in enumerate(v):
                    prod[i + j] = self.base_add(prod[i + j], self.base_mul(a, b))
        # x^k = a
        for idx in range(2 * k - 2, k - 1, -1):
            c = prod[idx]
            if not self.base_is_zero(c):
                prod[idx - k] = self.base_add(prod[idx - k], self.base_mul_int(c, self.a))
        return tuple(prod[:k])

    def ext_square(self, u: ExtElem) -> ExtElem:
        return self.ext_mul(u, u)

    def ext_pow(self, u: ExtElem, e: int) -> ExtElem:
        result = self.ext_one()
        while e:
            if e & 1:
                result = self.ext_mul(result, u)
            u = self.ext_mul(u, u)
            e >>= 1
        return result

    def ext_inv(self, u: ExtElem) -> ExtElem:
        """Inverse modulo x^k - a via extended Euclid over the base ring."""
        if self.k == 1:
            return (self.base_inv(u[0]),)
        modpoly = [self.base_neg(self.base_from_int(self.a))] + [self.base_zero()] * (self.k - 1) + [self.base_one()]
        inv = _poly_invert(list(u), modpoly, _BaseCoeffOps(self))
        zero = self.base_zero()
        return tuple(inv) + (zero,) * (self.k - len(inv))

    def ext_coeffs(self, u: ExtElem):
        """Flat iterator over all D*k base-level integer coefficients."""
        for b in u:
            yield from b


def _det_berkowitz(mat, mod: int) -> int:
    """Determinant over Z/mod, division-free, for small matrices."""
    n = len(mat)
    c = [1, -mat[0][0] % mod]
    for i in range(1, n):
        sub = [row[:i] for row in mat[:i]]
        row_i = mat[i][:i]
        col_i = [mat[j][i] for j in range(i)]
        s = [mat[i][i] % mod]
        v = col_i[:]
        for _ in range(i):
            s.append(sum(r * w for r, w in zip(row_i, v)) % mod)
            v = [sum(sub[r][t] * v[t] for t in range(i)) % mod for r in range(i)]
        toep = [1] + [-x % mod for x in s]
        new = [0] * (i + 2)
        for r in range(i + 2):
            acc = 0
            lo = max(0, r - len(toep) + 1)
            for j in range(lo, min(r, len(c) - 1) + 1):
                acc += toep[r - j] * c[j]
            new[r] = acc % mod
        c = new
    det = c[n]
    return det % mod if n % 2 == 0 else -det % mod


class _IntCoeffOps:
    """Coefficient arithmetic for polynomials over Z/N."""

    __slots__ = ("n_value",)

    def __init__(self, n_value: int):
        self.n_value = n_value

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, x) -> bool:
        return x % self.n_value == 0

    def add(self, x, y):
        return (x + y) % self.n_value

    def sub(self, x, y):
        return (x - y) % self.n_value

    def mul(self, x, y):
        return x * y % self.n_value

    def inv(self, x):
        N = self.n_value
        x %= N
        g = gcd(x, N)
        if g == N:
            raise NotInvertible("zero coefficient")
        if g != 1:
            raise FactorFound(g)
        return pow(x, -1, N)


class _BaseCoeffOps:
    """Coefficient arithmetic for polynomials over the base ring."""

    __slots__ = ("ctx",)

    def __init__(self, ctx: TowerContext):
        self.ctx = ctx

    def zero(self):
        return self.ctx.base_zero()

    def one(self):
        return self.ctx.base_one()

    def is_zero(self, x) -> bool:
        return self.ctx.base_is_zero(x)

    def add(self, x, y):
        return self.ctx.base_add(x, y)

    def sub(self, x, y):
        return self.ctx.base_sub(x, y)

    def mul(self, x, y):
        return self.ctx.base_mul(x, y)

    def inv(self, x):
        return self.ctx.base_inv(x)


def _strip(p, ops):
    while p and ops.is_zero(p[-1]):
        p.pop()
    return p


def _poly_invert(u, modpoly, ops):
    """u^{-1} mod modpoly by extended Euclid; coefficients through `ops`.

    Leading coefficients are stripped before each inversion, so any inversion
    failure is a genuine gcd event and propagates as FactorFound/NotInvertible.
    A nontrivial polynomial gcd raises NotInvertible.
    """
    r0, r1 = list(modpoly), [c for c in u]
    t0, t1 = [], [ops.one()]
    _strip(r1, ops)
    while True:
        if not r1:
            raise NotInvertible("polynomial shares a factor with the modulus")
        if len(r1) == 1:
            c = ops.inv(r1[0])
            return [ops.mul(c, t) for t in t1]
        # divide r0 by r1
        lc_inv = ops.inv(r1[-1])
        q = [ops.zero()] * (len(r0) - len(r1) + 1) if len(r0) >= len(r1) else []
        rem = list(r0)
        for i in range(len(rem) - len(r1), -1, -1):
            coef = ops.mul(rem[i + len(r1) - 1], lc_inv)
            if ops.is_zero(coef):
                continue
            q[i] = coef
            for j, b in enumerate(r1):
                rem[i + j] = ops.sub(rem[i + j], ops.mul(coef, b))
        _strip(rem, ops)
        # t_next = t0 - q * t1
        qt = [ops.zero()] * (len(q) + len(t1) - 1) if q and t1 else []
        for i, qc in enumerate(q):
            if ops.is_zero(qc):
                continue
            for j, tc in enumerate(t1):
                qt[i + j] = ops.add(qt[i + j], ops.mul(qc, tc))
        t_next = [ops.zero()] * max(len(t0), len(qt))
        for i in range(len(t_next)):
            a = t0[i] if i < len(t0) else ops.zero()
            b = qt[i] if i < len(qt) else ops.zero()
            t_next[i] = ops.sub(a, b)
        r0, r1 = r1, rem
        t0, t1 = t1, t_next
