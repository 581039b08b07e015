"""The tested integer family N = norm(gamma iota^n + b_n).

b_n is the Hensel lift of an order-k root of unity mod q = norm(iota), so
every member satisfies iota^n | alpha_n^k - 1 by construction.  Candidates
also have to clear a stack of admissibility checks before the curve stage
will certify anything; validate_params runs them in a fixed order and
reports the first failure as a stable reason code.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .ntheory import is_squarefree, perfect_power, is_probable_prime
from .quadratic import LocalContext, QuadInt, hensel_root_of_unity, multiplicative_order

REASON_SIZE = "q_power_too_small"
REASON_PERFECT_POWER = "perfect_power"
REASON_EVEN = "even"
REASON_SETUP_FACTOR = "shares_factor_with_setup"
REASON_LOW_ORDER = "premature_unit_power"
REASON_TWO_SIDED = "both_conjugates_divisible"
REASON_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SequenceParams:
    """Fixed data of one family: everything except the index n.

    q is stored redundantly and must equal norm(iota); it has to be an odd
    prime.  b_seed must have exact multiplicative order k mod q, which is
    what makes the lifted root primitive at every level.
    """

    d: int
    iota: QuadInt
    q: int
    gamma: QuadInt
    k: int
    b_seed: int
    alpha_exponent_threshold: Fraction = field(default=Fraction(1, 20))

    def __post_init__(self):
        if self.d >= 0 or not is_squarefree(self.d):
            raise ValueError("d must be negative and squarefree")
        if self.iota.d != self.d or self.gamma.d != self.d:
            raise ValueError("iota and gamma must live in the same field as d")
        if self.q != self.iota.norm():
            raise ValueError("q must equal norm(iota)")
        if self.q == 2 or not is_probable_prime(self.q):
            raise ValueError("norm(iota) must be an odd prime")
        if self.gamma.is_zero():
            raise ValueError("gamma must be nonzero")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        order = multiplicative_order(self.b_seed % self.q, self.q)
        if order != self.k:
            raise ValueError(f"b_seed has order {order} mod q, needs exactly k = {self.k}")
        a = self.alpha_exponent_threshold
        if not isinstance(a, Fraction):
            raise ValueError("alpha_exponent_threshold must be a Fraction")
        if not (0 < a <= Fraction(1, 2)):
            raise ValueError("alpha_exponent_threshold must lie in (0, 1/2]")


def gen_alpha(params: SequenceParams, n: int) -> tuple[QuadInt, int, int]:
    """(alpha_n, N, b_n) for the n-th member.  n starts at 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    b_n = hensel_root_of_unity(params.k, params.q, n, params.b_seed)
    alpha_n = params.gamma * params.iota**n + QuadInt.of_int(b_n, params.d)
    return alpha_n, alpha_n.norm(), b_n


def threshold_exponent(q: int, n_value: int) -> int:
    """Least y >= 1 with q^y > sqrt(n_value), compared exactly."""
    if n_value < 1:
        raise ValueError("need a positive integer")
    y = 1
    power = q
    while power * power <= n_value:
        power *= q
        y += 1
    return y


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str | None = None


def _reject(reason: str) -> Validation:
    return Validation(False, reason)


def validate_params(
    params: SequenceParams, n: int, n_value: int, disc_norm: int = 1
) -> Validation:
    """Admissibility of member n with norm n_value, first failure wins.

    Order: size bound, perfect power, parity, factors shared with the setup,
    then the two local unit conditions at the threshold power q^y.  The size
    bound compares q^n > N^(1/2 + alpha) through integer powers of both
    sides, no floating point.
    """
    if n_value < 2:
        return _reject(REASON_DEGENERATE)

    frac = Fraction(1, 2) + params.alpha_exponent_threshold
    # q^n > N^(num/den)  <=>  q^(n den) > N^num
    if params.q ** (n * frac.denominator) <= n_value**frac.numerator:
        return _reject(REASON_SIZE)

    if perfect_power(n_value) is not None:
        return _reject(REASON_PERFECT_POWER)

    if n_value % 2 == 0:
        return _reject(REASON_EVEN)
    if gcd(n_value, 6 * params.q * disc_norm) != 1:
        return _reject(REASON_SETUP_FACTOR)

    alpha_n, _, _ = gen_alpha(params, n)
    y = threshold_exponent(params.q, n_value)
    local = LocalContext.for_element(params.iota, y)
    modulus = local.modulus
    c = local.project(alpha_n)

    power = c
    for _ in range(1, params.k):
        if power == 1:
            return _reject(REASON_LOW_ORDER)
        power = power * c % modulus

    # the iota side of psi^2k - 1 is divisible by construction whenever
    # n >= y, so the teeth are in the conjugate side
    c_bar = local.project(alpha_n.conjugate())
    if pow(c, 2 * params.k, modulus) == 1 and pow(c_bar, 2 * params.k, modulus) == 1:
        return _reject(REASON_TWO_SIDED)

    return Validation(True)
