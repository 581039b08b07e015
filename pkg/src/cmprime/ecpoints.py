"""Elliptic curve points over the tower ring, with factor-surfacing arithmetic.

Points live on y^2 = x^3 + a4 x + a6 with coordinates in
R = ((Z/N)[t]/(g_H))[x]/(x^k - a).  The chord-tangent formulas are affine and
every division goes through ring inversion, so when N is prime (and the run
parameters are honest) they compute the actual group law, and when N is
composite they tend to blow up usefully: a proper divisor surfaces as
FactorFound, a total obstruction as NotInvertible.  Nothing here ever guesses
a branch: equal-x detection is exact coefficient equality, which can only
misrepresent the componentwise group law by failing loudly.

classify_zero is the coefficient-norm test used for annihilation and
nonvanishing checks: a point is zero when every x^i coefficient of its
Z-coordinate has norm divisible by N, and strongly nonzero when some
coefficient's norm is coprime to N (that single unit coefficient witnesses
nonvanishing modulo every prime of every divisor of N at once).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from random import Random

from .tower import FactorFound, TowerContext

ZERO = "zero"
STRONGLY_NONZERO = "strongly_nonzero"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class ProjPoint:
    """Projective point; arithmetic only ever produces z = 0 or z = 1."""

    x: tuple
    y: tuple
    z: tuple


def identity_point(ctx: TowerContext) -> ProjPoint:
    return ProjPoint(ctx.ext_zero(), ctx.ext_one(), ctx.ext_zero())


def affine_point(ctx: TowerContext, x, y) -> ProjPoint:
    return ProjPoint(x, y, ctx.ext_one())


def is_identity(point: ProjPoint, ctx: TowerContext) -> bool:
    return ctx.ext_is_zero(point.z)


def on_curve(point: ProjPoint, curve, ctx: TowerContext) -> bool:
    """Homogeneous curve membership, for tests and debugging."""
    x, y, z = point.x, point.y, point.z
    if ctx.ext_is_zero(z):
        return ctx.ext_is_zero(x) and not ctx.ext_is_zero(y)
    a4 = ctx.ext_from_base(curve.a4)
    a6 = ctx.ext_from_base(curve.a6)
    z2 = ctx.ext_square(z)
    lhs = ctx.ext_mul(ctx.ext_square(y), z)
    rhs = ctx.ext_add(
        ctx.ext_mul(ctx.ext_square(x), x),
        ctx.ext_mul(z2, ctx.ext_add(ctx.ext_mul(a4, x), ctx.ext_mul(a6, z))),
    )
    return lhs == rhs


def classify_zero(point: ProjPoint, ctx: TowerContext) -> str:
    """Coefficient-norm classification of the Z-coordinate.

    Raises FactorFound when some coefficient norm shares a proper factor
    with N; otherwise returns ZERO (all norms divisible by N),
    STRONGLY_NONZERO (some norm coprime to N), or AMBIGUOUS.
    """
    n_value = ctx.n_value
    gcds = []
    for coeff in point.z:
        g = gcd(ctx.base_norm(coeff), n_value)
        if 1 < g < n_value:
            raise FactorFound(g)
        gcds.append(g)
    if all(g == n_value for g in gcds):
        return ZERO
    if any(g == 1 for g in gcds):
        return STRONGLY_NONZERO
    return AMBIGUOUS


def ec_add(p_pt: ProjPoint, q_pt: ProjPoint, curve, ctx: TowerContext) -> ProjPoint:
    """P + Q by chord and tangent.

    Inversion failures propagate: FactorFound carries a composite witness,
    NotInvertible means this attempt cannot continue (unlucky point or
    composite N without a surfaced factor).
    """
    if ctx.ext_is_zero(p_pt.z):
        return q_pt
    if ctx.ext_is_zero(q_pt.z):
        return p_pt
    x1, y1 = p_pt.x, p_pt.y
    x2, y2 = q_pt.x, q_pt.y
    dx = ctx.ext_sub(x2, x1)
    if ctx.ext_is_zero(dx):
        ysum = ctx.ext_add(y1, y2)
        if ctx.ext_is_zero(ysum):
            return identity_point(ctx)
        # x1 = x2 and y2 != -y1: doubling, with lambda = (3x^2 + a4)/(y1+y2)
        # (equals the tangent slope when y1 = y2; mixed cases die in ext_inv)
        num = ctx.ext_add(
            ctx.ext_mul_int(ctx.ext_square(x1), 3), ctx.ext_from_base(curve.a4)
        )
        lam = ctx.ext_mul(num, ctx.ext_inv(ysum))
    else:
        lam = ctx.ext_mul(ctx.ext_sub(y2, y1), ctx.ext_inv(dx))
    x3 = ctx.ext_sub(ctx.ext_sub(ctx.ext_square(lam), x1), x2)
    y3 = ctx.ext_sub(ctx.ext_mul(lam, ctx.ext_sub(x1, x3)), y1)
    return affine_point(ctx, x3, y3)


def ec_scalar_mul(m: int, point: ProjPoint, curve, ctx: TowerContext) -> ProjPoint:
    """[m]P by left-to-right double-and-add; at most 2 bitlen(m) additions."""
    if m < 0:
        raise ValueError("scalar must be nonnegative")
    acc = identity_point(ctx)
    for shift in range(m.bit_length() - 1, -1, -1):
        acc = ec_add(acc, acc, curve, ctx)
        if (m >> shift) & 1:
            acc = ec_add(acc, point, curve, ctx)
    return acc


def _ring_sqrt(rhs, ctx: TowerContext, rng: Random):
    """Square root of rhs in R, or None.

    Exponent schemes are the single-field ones for size N^k, applied globally;
    they are correct when N is prime and every component has that size, and in
    any other situation the final y^2 = rhs verification rejects the output.
    """
    if ctx.ext_is_zero(rhs):
        return rhs
    m = ctx.n_value**ctx.k
    if m % 4 == 3:
        y = ctx.ext_pow(rhs, (m + 1) // 4)
    elif m % 8 == 5:
        t = ctx.ext_pow(ctx.ext_mul_int(rhs, 2), (m - 5) // 8)
        i = ctx.ext_mul(ctx.ext_mul_int(rhs, 2), ctx.ext_square(t))
        y = ctx.ext_mul(ctx.ext_mul(rhs, t), ctx.ext_sub(i, ctx.ext_one()))
    else:
        y = _cipolla(rhs, m, ctx, rng)
        if y is None:
            return None
    return y if ctx.ext_square(y) == rhs else None


def _cipolla(rhs, m: int, ctx: TowerContext, rng: Random):
    """Square root for component size m = 1 mod 8, closed form.

    Draws t until u = t^2 - rhs passes the global nonresidue test, then
    exponentiates t + w in R[w]/(w^2 - u).  One exponentiation, no data
    dependent branching, so it acts componentwise on a product of fields.
    A nonzero leftover w part means rhs is not a square in some component;
    no other t can fix that, so the draw loop stops there.
    """
    minus_one = ctx.ext_from_int(-1)
    for _ in range(64):
        t = tuple(
            ctx.base_from_coeffs([rng.randrange(ctx.n_value) for _ in range(ctx.degree)])
            for _ in range(ctx.k)
        )
        u = ctx.ext_sub(ctx.ext_square(t), rhs)
        if ctx.ext_is_zero(u):
            return t
        if ctx.ext_pow(u, (m - 1) // 2) != minus_one:
            continue
        a, b = t, ctx.ext_one()
        ra, rb = ctx.ext_one(), ctx.ext_zero()
        e = (m + 1) // 2
        while e:
            if e & 1:
                ra, rb = (
                    ctx.ext_add(ctx.ext_mul(ra, a), ctx.ext_mul(ctx.ext_mul(rb, b), u)),
                    ctx.ext_add(ctx.ext_mul(ra, b), ctx.ext_mul(rb, a)),
                )
            a, b = (
                ctx.ext_add(ctx.ext_square(a), ctx.ext_mul(ctx.ext_square(b), u)),
                ctx.ext_mul_int(ctx.ext_mul(a, b), 2),
            )
            e >>= 1
        return ra if ctx.ext_is_zero(rb) else None
    return None


def random_point(curve, ctx: TowerContext, rng_seed: int):
    """Sample a point with uniform x-coordinate, or None after 64 tries.

    The same seed always yields the same draws.  Persistent failure is the
    probably-composite signal: square roots stop behaving when N is not prime.
    """
    rng = Random(rng_seed)
    a4 = ctx.ext_from_base(curve.a4)
    a6 = ctx.ext_from_base(curve.a6)
    for _ in range(64):
        x = tuple(
            ctx.base_from_coeffs([rng.randrange(ctx.n_value) for _ in range(ctx.degree)])
            for _ in range(ctx.k)
        )
        rhs = ctx.ext_add(
            ctx.ext_mul(ctx.ext_square(x), x),
            ctx.ext_add(ctx.ext_mul(a4, x), a6),
        )
        y = _ring_sqrt(rhs, ctx, rng)
        if y is not None:
            return affine_point(ctx, x, y)
    return None
