"""Bounded-norm representatives of residue classes modulo (iota).

A residue class beta mod (iota) in an imaginary quadratic order is a shifted
sublattice of the plane.  grid_reduce picks the class representative inside the
fundamental cell spanned by iota and -sqrt(d)*iota, which caps its norm at
(d^2 - d) * norm(iota).  small_norm_lifts then enumerates every class member
with norm up to norm(iota) by scanning cofactors X in a fixed signed box:
whenever norm(X) >= 4(-d) + 4d^2 the sum X*iota + beta provably outgrows
norm(iota), so the box is complete.

trial_divide_residues applies this to the finale of the curve test: each prime
divisor of a surviving candidate N must have a generator congruent to
+-psi^m mod (iota)^e with norm below q^e, so if no enumerated lift's norm
properly divides N, N is prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

from .quadratic import LocalContext, QuadInt


def norm_cap_factor(d: int) -> int:
    """Reduced representatives satisfy norm(beta) <= (d^2 - d) * norm(iota)."""
    return d * d - d


def cofactor_box_bound(d: int) -> int:
    """Cofactors with norm below 4(-d) + 4d^2 suffice; side bound of the scan box."""
    t = 4 * (-d) + 4 * d * d
    b = isqrt(t)
    return b if b * b == t else b + 1


def grid_reduce(iota: QuadInt, beta: QuadInt) -> QuadInt:
    """The representative of beta mod (iota) inside the fundamental cell.

    Solves beta = A*iota + B*(-sqrt(d)*iota) over Q exactly, then drops the
    integer parts of A and B.
    """
    if iota.d != beta.d:
        raise ValueError("mixed fields")
    if iota.is_zero():
        raise ZeroDivisionError("iota must be nonzero")
    d = iota.d
    ia, ib = iota._doubled()
    ba, bb = beta._doubled()
    # basis vectors in doubled coordinates: iota = (ia, ib), -sqrt(d)*iota = (-ib*d, -ia)
    det = ia * (-ia) - ib * (-ib * d)  # = -(ia^2 - d ib^2) = -4 norm(iota), nonzero
    A = Fraction(ba * (-ia) - bb * (-ib * d), det)
    B = Fraction(ia * bb - ib * ba, det)
    mu = iota * QuadInt(0, -1, d)  # -sqrt(d) * iota
    red = beta - QuadInt.of_int(floor(A), d) * iota - QuadInt.of_int(floor(B), d) * mu
    assert red.norm() <= norm_cap_factor(d) * iota.norm()
    assert (red - beta).divexact(iota) is not None
    return red


@dataclass(frozen=True)
class LiftSet:
    """All class members of small norm: reduced representative + sorted enumeration."""

    iota: QuadInt
    reduced_beta: QuadInt
    lifts: tuple[QuadInt, ...]


def small_norm_lifts(iota: QuadInt, beta: QuadInt) -> LiftSet:
    """Every mu = beta (mod iota) with norm(mu) <= norm(iota), duplicate-free.

    Scans X over the signed cofactor box; for d = 1 (mod 4) the box runs over
    half-integer points (u + v*sqrt(d))/2 with u = v (mod 2) as well, since
    cofactors live in the full maximal order.
    """
    d = iota.d
    red = grid_reduce(iota, beta)
    cap = iota.norm()
    bound = cofactor_box_bound(d)
    found = set()
    if d % 4 == 1:
        # doubled coordinates, parity-matched
        for u in range(-2 * bound, 2 * bound + 1):
            for v in range(-2 * bound + (u & 1), 2 * bound + 1, 2):
                x = QuadInt._from_doubled(u, v, d)
                mu = x * iota + red
                if mu.norm() <= cap:
                    found.add(mu)
    else:
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                mu = QuadInt(u, v, d) * iota + red
                if mu.norm() <= cap:
                    found.add(mu)
    ordered = sorted(found, key=lambda m: (m.norm(),) + m._doubled())
    return LiftSet(iota, red, tuple(ordered))


@dataclass(frozen=True)
class ResidueScanRecord:
    m: int
    sign: int
    lift_count: int


@dataclass(frozen=True)
class ResidueScan:
    passed: bool
    factor: int | None
    records: tuple[ResidueScanRecord, ...]


def trial_divide_residues(
    psi: QuadInt, k: int, iota: QuadInt, exponent: int, n_value: int, ctx: LocalContext
) -> ResidueScan:
    """Check no bounded-norm lift of +-psi^m mod (iota)^exponent divides N.

    Any prime p | N has a degree-one generator congruent to a unit multiple of
    psi^m for some 1 <= m <= k, with norm(p-generator) = p <= q^exponent once
    q^exponent has passed sqrt(N).  Scanning both unit signs of each power and
    testing every enumerated lift's norm against N either passes (N prime) or
    yields a proper factor.  First factor in (m, sign) order wins.
    """
    if ctx.exponent < exponent:
        raise ValueError("local context precision below requested exponent")
    if exponent < 1:
        raise ValueError("exponent must be positive")
    modulus = iota**exponent
    q_pow = ctx.q**exponent
    c = ctx.project(psi) % q_pow
    records = []
    factor = None
    cm = 1
    for m in range(1, k + 1):
        cm = cm * c % q_pow
        for sign in (1, -1):
            rep = QuadInt.of_int(sign * cm % q_pow, iota.d)
            lifts = small_norm_lifts(modulus, rep)
            records.append(ResidueScanRecord(m, sign, len(lifts.lifts)))
            if factor is None:
                for mu in lifts.lifts:
                    f = mu.norm()
                    if 1 < f < n_value and n_value % f == 0:
                        factor = f
                        break
    return ResidueScan(factor is None, factor, tuple(records))
