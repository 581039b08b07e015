"""Primality proving for sequence members via CM curve annihilation.

The pipeline layers cheap screens (trial division, perfect powers, the
reduction gate), the Las Vegas curve test under both character signs, the
residue lattice finale, and a deterministic fallback (Miller-Rabin, then
plain trial division) for members the curve route cannot certify.  A Prime
verdict from the curve route always carries a self-contained certificate
that `verify_certificate` replays from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from random import Random

from .certificate import Certificate, CertificateError, parse_certificate
from .curves import CurveSpec, curve_by_id, good_reduction_check, load_catalog, reduce_curve
from .ecpoints import (
    STRONGLY_NONZERO,
    ZERO,
    classify_zero,
    ec_scalar_mul,
    random_point,
)
from .lattice import trial_divide_residues
from .ntheory import (
    SMALL_PRIMES,
    derive_seed,
    miller_rabin,
    perfect_power,
    prime_factors,
)
from .quadratic import LocalContext, QuadInt
from .sequences import SequenceParams, gen_alpha, validate_params
from .tower import FactorFound, NotInvertible, TowerContext

NONRESIDUE_DRAWS = 128
POINT_KIND_PRIME = "possibly_prime"
POINT_KIND_FACTOR = "factor"
POINT_KIND_FAILED = "annihilation_failed"
POINT_KIND_RETRY = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Final answer for one candidate, with its strongest witness attached.

    tag is "prime" or "composite".  A curve-route prime verdict carries the
    serialized certificate; composite verdicts carry a proper factor when
    the route that decided produced one (Miller-Rabin witnesses are bases,
    not factors, so those land in detail).
    """

    tag: str
    method: str
    factor: int | None = None
    certificate: str | None = None
    detail: str | None = None

    def __post_init__(self):
        if self.tag not in ("prime", "composite"):
            raise ValueError(f"bad verdict tag {self.tag!r}")
        if self.factor is not None and self.tag != "composite":
            raise ValueError("factor only accompanies composite verdicts")
        if self.method == "curve_certificate" and self.certificate is None:
            raise ValueError("curve_certificate verdicts must carry a certificate")


@dataclass(frozen=True)
class LadderOutcome:
    """One Las Vegas attempt: what the annihilation ladder saw."""

    kind: str  # possibly_prime | factor | annihilation_failed | inconclusive
    e_q: int | None = None
    factor: int | None = None
    note: str | None = None


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    reason: str | None = None


def _nonresidue_ok(a: int, n_value: int, k: int) -> bool:
    """Conditions under which x^k - a is a usable extension modulus.

    For every prime m | k the element a must not be an m-th power residue
    (a^((N-1)/m) != 1).  When 4 | k the binomial needs more: a must avoid
    -4 times fourth powers, which for prime N is exactly (-a/4) not being
    a fourth power.  The power tests are only conclusive for prime N; for
    composite N a later stage surfaces the lie.
    """
    for m in prime_factors(k):
        if pow(a, (n_value - 1) // m, n_value) == 1:
            return False
    if k % 4 == 0:
        if pow(a, (n_value - 1) // 2, n_value) == 1:
            return False
        inv4 = pow(4, -1, n_value)
        if pow(-a * inv4 % n_value, (n_value - 1) // 4, n_value) == 1:
            return False
    return True


def find_nonresidue(n_value: int, k: int, rng_seed: int) -> int | None:
    """Draw a for which x^k - a stays irreducible over every residue field.

    Requires k | N - 1; callers route k-mismatches to the fallback before
    asking.  A draw sharing a factor with N ends the search with that
    factor.  None after the draw budget means N is very unlikely to be
    prime (a prime admits such a by counting), and the caller should fall
    back rather than conclude anything.
    """
    if n_value < 3 or (n_value - 1) % k != 0:
        raise ValueError("k must divide N - 1")
    rng = Random(rng_seed)
    for _ in range(NONRESIDUE_DRAWS):
        a = rng.randrange(2, n_value)
        g = gcd(a, n_value)
        if g > 1:
            raise FactorFound(g)
        if _nonresidue_ok(a, n_value, k):
            return a
    return None


def _character_shift(params: SequenceParams, alpha: QuadInt, sign: int) -> int:
    """norm(psi^k - 1) for psi = sign * alpha: the integer group annihilator."""
    psi = alpha if sign > 0 else -alpha
    shifted = psi ** params.k - QuadInt.of_int(1, params.d)
    return shifted.norm()


def _split_annihilator(annihilator: int, q: int, cap: int) -> tuple[int, int]:
    e = 0
    rest = annihilator
    while e < cap and rest % q == 0:
        rest //= q
        e += 1
    return e, annihilator // q**e


def _member_conditions_hold(
    params: SequenceParams, alpha: QuadInt, exponent: int
) -> bool:
    """Re-check the unit-order and two-sided conditions at a given level.

    Passing at the screening level implies passing at any higher one, so
    this is belt plus braces at the discovered annihilation exponent; it is
    still enforced because a certificate must not depend on that argument.
    """
    local = LocalContext.for_element(params.iota, exponent)
    modulus = local.modulus
    c = local.project(alpha) % modulus
    power = c
    for _ in range(1, params.k):
        if power == 1:
            return False
        power = power * c % modulus
    c_bar = local.project(alpha.conjugate()) % modulus
    if (
        pow(c, 2 * params.k, modulus) == 1
        and pow(c_bar, 2 * params.k, modulus) == 1
    ):
        return False
    return True


def las_vegas_test(
    n_value: int,
    params: SequenceParams,
    n: int,
    spec: CurveSpec,
    rng_seed: int,
    *,
    sign_hypothesis: int = 1,
    a_nonresidue: int | None = None,
    ctx: TowerContext | None = None,
    curve=None,
) -> LadderOutcome:
    """One randomized annihilation attempt under one character sign.

    Draws a point Q from rng_seed, strips the q-free part of the character
    annihilator, then walks P, [q]P, [q^2]P, ... looking for the first zero.
    Outcomes:

    - possibly_prime(e_q): zero appeared at x = e_q >= 1, the predecessor
      was a unit point, and q^(2 e_q) > N.  Primality still needs the
      residue finale.
    - factor: the arithmetic met a zero divisor; its factor proves N
      composite.
    - annihilation_failed: the full ladder never hit zero.  For prime N the
      true sign annihilates every point, so this refutes the current sign
      hypothesis outright.
    - inconclusive: a retryable miss (bad point draw, non-unit gcd in an
      inversion, zero at x = 0, or too small an exponent).  Says nothing;
      redraw.
    """
    if sign_hypothesis not in (1, -1):
        raise ValueError("sign_hypothesis must be +1 or -1")
    try:
        alpha, n_check, _ = gen_alpha(params, n)
        if n_check != n_value:
            raise ValueError("n_value does not match the sequence member")
        if a_nonresidue is None:
            a_nonresidue = find_nonresidue(
                n_value, params.k, derive_seed(rng_seed, 0)
            )
            if a_nonresidue is None:
                return LadderOutcome(POINT_KIND_RETRY, note="no_nonresidue")
        if ctx is None:
            ctx = TowerContext(n_value, spec.g_H, params.k, a_nonresidue)
        if curve is None:
            curve = reduce_curve(spec, ctx)

        annihilator = _character_shift(params, alpha, sign_hypothesis)
        e_prime, m_prime = _split_annihilator(annihilator, params.q, n)

        point = random_point(curve, ctx, rng_seed)
        if point is None:
            return LadderOutcome(POINT_KIND_RETRY, note="no_point")
        cur = ec_scalar_mul(m_prime, point, curve, ctx)
        prev_class = None
        for x in range(e_prime + 1):
            cls = classify_zero(cur, ctx)
            if cls == ZERO:
                if x == 0:
                    return LadderOutcome(POINT_KIND_RETRY, note="order_one_point")
                if prev_class != STRONGLY_NONZERO:
                    return LadderOutcome(
                        POINT_KIND_RETRY, note="ambiguous_predecessor"
                    )
                if params.q ** (2 * x) <= n_value:
                    return LadderOutcome(POINT_KIND_RETRY, note="exponent_too_small")
                return LadderOutcome(POINT_KIND_PRIME, e_q=x)
            prev_class = cls
            if x < e_prime:
                cur = ec_scalar_mul(params.q, cur, curve, ctx)
        return LadderOutcome(POINT_KIND_FAILED)
    except FactorFound as exc:
        return LadderOutcome(POINT_KIND_FACTOR, factor=exc.factor)
    except NotInvertible:
        return LadderOutcome(POINT_KIND_RETRY, note="not_invertible")


def baseline_prove(n_value: int) -> tuple[str, int | None]:
    """Deterministic trial division up to sqrt(N) on a 2-3 wheel.

    The last word for candidates the curve route cannot certify; exact but
    exponential-bit-cost, fine at desk scale.
    """
    if n_value < 2:
        return "composite", None
    for p in (2, 3):
        if n_value == p:
            return "prime", None
        if n_value % p == 0:
            return "composite", p
    f = 5
    while f * f <= n_value:
        if n_value % f == 0:
            return "composite", f
        if n_value % (f + 2) == 0:
            return "composite", f + 2
        f += 6
    return "prime", None


def _fallback(n_value: int, rng_seed: int, why: str) -> Verdict:
    passed, witness = miller_rabin(n_value, rounds=64, seed=derive_seed(rng_seed, 9))
    if not passed:
        return Verdict(
            "composite",
            "miller_rabin",
            detail=f"{why}; witness base {witness}",
        )
    tag, factor = baseline_prove(n_value)
    return Verdict(tag, "baseline_trial_division", factor=factor, detail=why)


def prove_pipeline(
    n_value: int,
    params: SequenceParams,
    n: int,
    spec: CurveSpec,
    rng_seed: int = 0,
    attempts: int = 4,
    allow_fallback: bool = True,
) -> Verdict:
    """Decide one sequence member, preferring a certificate-backed verdict.

    Stages: cheap screens, then per-sign Las Vegas ladders with the residue
    finale on success, then the deterministic fallback.  A completed ladder
    that never reaches zero refutes its sign hypothesis; once every viable
    sign is refuted the candidate is composite with no further work.  All
    randomness is replayable from rng_seed.

    With allow_fallback off, a candidate the curve route cannot decide
    raises LookupError instead of going to Miller-Rabin plus division.
    """
    if attempts < 1:
        raise ValueError("attempts must be positive")
    if n_value < 2:
        return Verdict("composite", "preamble", detail="below 2")
    for p in SMALL_PRIMES:
        if n_value == p:
            return Verdict("prime", "trial_division", detail="small prime")
        if n_value % p == 0:
            return Verdict("composite", "trial_division", factor=p)
    power = perfect_power(n_value)
    if power is not None:
        base, exponent = power
        return Verdict(
            "composite", "perfect_power", factor=base, detail=f"{base}^{exponent}"
        )

    gate = good_reduction_check(spec, n_value)
    if gate.status == "composite_witness":
        return Verdict("composite", "reduction_gate", factor=gate.witness)

    fallback_reason = None
    if gate.status == "bad_reduction":
        fallback_reason = "bad_reduction"
    if fallback_reason is None:
        _, member_value, _ = gen_alpha(params, n)
        if member_value != n_value:
            # the annihilation argument is only about the member's norm
            fallback_reason = "not_the_member_norm"
    if fallback_reason is None:
        check = validate_params(params, n, n_value, disc_norm=spec.disc_norm)
        if not check.ok:
            fallback_reason = f"member_screen:{check.reason}"
    if fallback_reason is None and (n_value - 1) % params.k != 0:
        fallback_reason = "k_does_not_divide_n_minus_1"

    if fallback_reason is None:
        try:
            a_nonresidue = find_nonresidue(
                n_value, params.k, derive_seed(rng_seed, 7)
            )
        except FactorFound as exc:
            return Verdict("composite", "nonresidue_gcd", factor=exc.factor)
        if a_nonresidue is None:
            fallback_reason = "no_nonresidue_found"

    if fallback_reason is None:
        try:
            ctx = TowerContext(n_value, spec.g_H, params.k, a_nonresidue)
            curve = reduce_curve(spec, ctx)
        except FactorFound as exc:
            return Verdict("composite", "reduction_arithmetic", factor=exc.factor)
        except NotInvertible:
            fallback_reason = "tower_setup_failed"

    if fallback_reason is None:
        alpha, _, _ = gen_alpha(params, n)
        signs = (1,) if params.k % 2 == 0 else (1, -1)
        refuted = set()
        for sign_index, sign in enumerate(signs):
            for attempt in range(attempts):
                seed = derive_seed(rng_seed, sign_index + 1, attempt)
                outcome = las_vegas_test(
                    n_value,
                    params,
                    n,
                    spec,
                    seed,
                    sign_hypothesis=sign,
                    a_nonresidue=a_nonresidue,
                    ctx=ctx,
                    curve=curve,
                )
                if outcome.kind == POINT_KIND_FACTOR:
                    return Verdict("composite", "curve_factor", factor=outcome.factor)
                if outcome.kind == POINT_KIND_FAILED:
                    refuted.add(sign)
                    break
                if outcome.kind != POINT_KIND_PRIME:
                    continue
                if not _member_conditions_hold(params, alpha, outcome.e_q):
                    continue
                psi = alpha if sign > 0 else -alpha
                local = LocalContext.for_element(params.iota, outcome.e_q)
                scan = trial_divide_residues(
                    psi, params.k, params.iota, outcome.e_q, n_value, local
                )
                if scan.factor is not None:
                    return Verdict(
                        "composite", "residue_factor", factor=scan.factor
                    )
                if not scan.passed:
                    continue
                cert = Certificate(
                    n_value=n_value,
                    params=params,
                    n=n,
                    curve_id=spec.id,
                    a_nonresidue=a_nonresidue,
                    point_seed=seed,
                    e_q=outcome.e_q,
                    sign_hypothesis=sign,
                    residue_check=scan.records,
                )
                replay = verify_certificate(cert, spec=spec)
                if not replay.valid:
                    raise RuntimeError(
                        f"fresh certificate failed verification: {replay.reason}"
                    )
                return Verdict(
                    "prime", "curve_certificate", certificate=cert.serialize()
                )
        if len(refuted) == len(signs):
            return Verdict(
                "composite",
                "annihilation",
                detail="completed ladders stayed nonzero under every sign",
            )
        fallback_reason = "curve_route_inconclusive"

    if not allow_fallback:
        raise LookupError(f"fallback disabled, undecided: {fallback_reason}")
    return _fallback(n_value, rng_seed, fallback_reason)


def prove(
    n_value: int,
    params: SequenceParams,
    n: int,
    spec: CurveSpec,
    rng_seed: int = 0,
    attempts: int = 4,
    allow_fallback: bool = True,
) -> Verdict:
    """Alias for prove_pipeline; the name most callers want."""
    return prove_pipeline(n_value, params, n, spec, rng_seed, attempts, allow_fallback)


def verify_certificate(
    cert: Certificate | str, spec: CurveSpec | None = None, catalog_path=None
) -> VerifyResult:
    """Replay a certificate from scratch and accept only a perfect match.

    Everything is re-derived: the member and its screens, the reduction
    gate, the stored nonresidue's conditions (no re-search), the seeded
    point, the two ladder endpoints around e_q, the exponent size bound,
    and the residue scan, whose per-step tallies must equal the stored
    ones.  The first discrepancy is reported as the reason.
    """
    if isinstance(cert, str):
        try:
            cert = parse_certificate(cert)
        except CertificateError as exc:
            return VerifyResult(False, f"parse:{exc}")
    if spec is None:
        catalog = load_catalog() if catalog_path is None else load_catalog(catalog_path)
        spec = curve_by_id(catalog, cert.curve_id)
        if spec is None:
            return VerifyResult(False, "unknown_curve")
    elif spec.id != cert.curve_id:
        return VerifyResult(False, "curve_mismatch")
    params = cert.params
    if spec.d != params.d:
        return VerifyResult(False, "curve_field_mismatch")

    try:
        alpha, n_value, _ = gen_alpha(params, cert.n)
    except ValueError as exc:
        return VerifyResult(False, f"member:{exc}")
    if n_value != cert.n_value:
        return VerifyResult(False, "member_value_mismatch")

    check = validate_params(params, cert.n, n_value, disc_norm=spec.disc_norm)
    if not check.ok:
        return VerifyResult(False, f"member_screen:{check.reason}")
    if good_reduction_check(spec, n_value).status != "ok":
        return VerifyResult(False, "reduction_gate")
    if (n_value - 1) % params.k != 0:
        return VerifyResult(False, "k_does_not_divide_n_minus_1")

    a = cert.a_nonresidue
    if gcd(a, n_value) != 1:
        return VerifyResult(False, "nonresidue_shares_factor")
    if not _nonresidue_ok(a, n_value, params.k):
        return VerifyResult(False, "nonresidue_conditions")

    annihilator = _character_shift(params, alpha, cert.sign_hypothesis)
    e_prime, m_prime = _split_annihilator(annihilator, params.q, cert.n)
    if not (1 <= cert.e_q <= e_prime):
        return VerifyResult(False, "exponent_range")
    if params.q ** (2 * cert.e_q) <= n_value:
        return VerifyResult(False, "exponent_size")
    if not _member_conditions_hold(params, alpha, cert.e_q):
        return VerifyResult(False, "member_conditions")

    try:
        ctx = TowerContext(n_value, spec.g_H, params.k, a)
        curve = reduce_curve(spec, ctx)
        point = random_point(curve, ctx, cert.point_seed)
        if point is None:
            return VerifyResult(False, "point_seed")
        # replay the prover's exact chain: [m']Q, then q steps; a single
        # [m' q^(e_q-1)]Q uses a different addition chain whose intermediates
        # can hit partial-identity alignments the prover never touched
        before = ec_scalar_mul(m_prime, point, curve, ctx)
        for _ in range(cert.e_q - 1):
            before = ec_scalar_mul(params.q, before, curve, ctx)
        if classify_zero(before, ctx) != STRONGLY_NONZERO:
            return VerifyResult(False, "predecessor_not_unit")
        after = ec_scalar_mul(params.q, before, curve, ctx)
        if classify_zero(after, ctx) != ZERO:
            return VerifyResult(False, "annihilation_missing")
    except FactorFound:
        return VerifyResult(False, "arithmetic_factor")
    except NotInvertible:
        return VerifyResult(False, "arithmetic_noninvertible")

    psi = alpha if cert.sign_hypothesis > 0 else -alpha
    local = LocalContext.for_element(params.iota, cert.e_q)
    scan = trial_divide_residues(
        psi, params.k, params.iota, cert.e_q, n_value, local
    )
    if not scan.passed:
        return VerifyResult(False, "residue_factor")
    if scan.records != cert.residue_check:
        return VerifyResult(False, "residue_records")
    return VerifyResult(True, None)
