"""Curve group law, ring square roots, point sampling, zero classification."""

import itertools
from random import Random

import pytest

from cmprime.curves import curve_for_d, load_catalog, reduce_curve
from cmprime.ecpoints import (
    AMBIGUOUS,
    STRONGLY_NONZERO,
    ZERO,
    _ring_sqrt,
    affine_point,
    classify_zero,
    ec_add,
    ec_scalar_mul,
    identity_point,
    is_identity,
    on_curve,
    random_point,
)
from cmprime.ntheory import is_probable_prime
from cmprime.quadratic import QuadInt, hensel_root_of_unity
from cmprime.tower import FactorFound, NotInvertible, TowerContext

CM7_G = (2, -1, 1)


def field_ctx(p):
    # (Z/p)[t]/(t) with k = 1 collapses the tower to the prime field
    return TowerContext(p, (0, 1), 1, 1)


def field_curve(ctx, a4, a6):
    return type("S", (), {"a4": ctx.base_from_int(a4), "a6": ctx.base_from_int(a6)})


def field_pt(ctx, x, y):
    return affine_point(ctx, ctx.ext_from_int(x), ctx.ext_from_int(y))


def as_pair(point, ctx):
    if is_identity(point, ctx):
        return None
    return point.x[0][0], point.y[0][0]


def brute_points(p, a4, a6):
    ctx = field_ctx(p)
    pts = [identity_point(ctx)]
    for x in range(p):
        rhs = (x * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y - rhs) % p == 0:
                pts.append(field_pt(ctx, x, y))
    return ctx, pts


def oracle_add(P, Q, a4, p):
    """Textbook affine chord and tangent over F_p; None is the identity."""
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a4) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow((x2 - x1) % p, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def test_identity_and_inverse_laws():
    ctx, pts = brute_points(13, 2, 3)
    curve = field_curve(ctx, 2, 3)
    O = identity_point(ctx)
    assert is_identity(ec_add(O, O, curve, ctx), ctx)
    for P in pts[1:]:
        assert ec_add(P, O, curve, ctx) == P
        assert ec_add(O, P, curve, ctx) == P
        x, y = as_pair(P, ctx)
        neg = field_pt(ctx, x, (-y) % 13)
        assert is_identity(ec_add(P, neg, curve, ctx), ctx)


def test_add_matches_oracle_on_all_pairs():
    p = 97
    ctx, pts = brute_points(p, 2, 3)
    curve = field_curve(ctx, 2, 3)
    for P in pts:
        for Q in pts:
            got = as_pair(ec_add(P, Q, curve, ctx), ctx)
            want = oracle_add(as_pair(P, ctx), as_pair(Q, ctx), 2, p)
            assert got == want


def test_associativity_on_all_triples():
    ctx, pts = brute_points(13, 2, 3)
    curve = field_curve(ctx, 2, 3)
    for A, B, C in itertools.product(pts, repeat=3):
        left = ec_add(ec_add(A, B, curve, ctx), C, curve, ctx)
        right = ec_add(A, ec_add(B, C, curve, ctx), curve, ctx)
        assert left == right


def test_scalar_mul_matches_iterated_addition():
    ctx, pts = brute_points(13, 2, 3)
    curve = field_curve(ctx, 2, 3)
    P = pts[1]
    acc = identity_point(ctx)
    for m in range(3 * len(pts)):
        assert ec_scalar_mul(m, P, curve, ctx) == acc
        acc = ec_add(acc, P, curve, ctx)


def test_scalar_mul_rejects_negative():
    ctx, pts = brute_points(13, 2, 3)
    curve = field_curve(ctx, 2, 3)
    with pytest.raises(ValueError):
        ec_scalar_mul(-1, pts[1], curve, ctx)


def test_group_order_annihilates_every_point():
    ctx, pts = brute_points(97, 2, 3)
    curve = field_curve(ctx, 2, 3)
    order = len(pts)
    for P in pts[::7]:
        assert is_identity(ec_scalar_mul(order, P, curve, ctx), ctx)


def test_scalar_mul_addition_budget(monkeypatch):
    import cmprime.ecpoints as mod

    ctx, pts = brute_points(97, 2, 3)
    curve = field_curve(ctx, 2, 3)
    calls = []
    real = mod.ec_add
    monkeypatch.setattr(mod, "ec_add", lambda *a: calls.append(1) or real(*a))
    for m in (1, 5, 601, 999983):
        calls.clear()
        mod.ec_scalar_mul(m, pts[3], curve, ctx)
        assert len(calls) <= 2 * m.bit_length()


@pytest.mark.parametrize("p", [19, 13, 17])
def test_point_sampling_covers_all_sqrt_branches(p):
    # p = 19, 13, 17 hit the 3 mod 4, 5 mod 8 and 1 mod 8 paths
    ctx = field_ctx(p)
    curve = field_curve(ctx, 2, 3)
    for seed in range(12):
        Q = random_point(curve, ctx, seed)
        assert Q is not None
        assert on_curve(Q, curve, ctx)


def test_sqrt_of_zero_is_zero():
    ctx = field_ctx(19)
    assert _ring_sqrt(ctx.ext_zero(), ctx, Random(0)) == ctx.ext_zero()


def test_known_squares_round_trip_in_split_tower():
    # 23 splits both in the field and in x^2 - 5, so the tower is a product
    # of two copies of the 529 element field and the 1 mod 8 path must act
    # componentwise
    ctx = TowerContext(23, CM7_G, 2, 5)
    rng = Random(7)
    for _ in range(40):
        y0 = tuple(ctx.base_from_coeffs([rng.randrange(23) for _ in range(2)]) for _ in range(2))
        rhs = ctx.ext_square(y0)
        y = _ring_sqrt(rhs, ctx, rng)
        assert y is not None
        assert ctx.ext_square(y) == rhs


def test_point_sampling_in_split_tower():
    catalog = load_catalog()
    spec = curve_for_d(catalog, -7)
    ctx = TowerContext(23, CM7_G, 2, 5)
    curve = reduce_curve(spec, ctx)
    for seed in range(8):
        Q = random_point(curve, ctx, seed)
        assert Q is not None
        assert on_curve(Q, curve, ctx)


def test_point_sampling_is_deterministic():
    ctx = field_ctx(97)
    curve = field_curve(ctx, 2, 3)
    assert random_point(curve, ctx, 11) == random_point(curve, ctx, 11)
    pts = {random_point(curve, ctx, s) for s in range(6)}
    assert len(pts) > 1


def test_point_sampling_fails_on_composite():
    # no small factors, so nothing surfaces a divisor; the square root
    # verification just keeps rejecting and the sampler gives up
    n = 10007 * 10009
    ctx = field_ctx(n)
    curve = field_curve(ctx, 2, 3)
    for seed in range(3):
        assert random_point(curve, ctx, seed) is None


def test_classify_identity_and_affine():
    ctx = field_ctx(13)
    assert classify_zero(identity_point(ctx), ctx) == ZERO
    assert classify_zero(field_pt(ctx, 1, 4), ctx) == STRONGLY_NONZERO


def test_classify_surfaces_planted_factor():
    ctx = TowerContext(15, CM7_G, 2, 1)
    # z coefficient 5 has norm 25 = 10 mod 15, and gcd(10, 15) = 5
    z = (ctx.base_from_coeffs([5, 0]), ctx.base_zero())
    point = type(identity_point(ctx))(ctx.ext_one(), ctx.ext_one(), z)
    with pytest.raises(FactorFound) as info:
        classify_zero(point, ctx)
    assert info.value.factor == 5


def test_add_surfaces_planted_factor():
    ctx = field_ctx(15)
    curve = field_curve(ctx, 2, 3)
    # x difference is 3, invertible mod 5 but not mod 3
    P = field_pt(ctx, 1, 2)
    Q = field_pt(ctx, 4, 7)
    with pytest.raises(FactorFound) as info:
        ec_add(P, Q, curve, ctx)
    assert info.value.factor == 3


def corpus_context():
    """The d = -7, q = 11, k = 5 sequence member at n = 4, a verified prime."""
    d, q, k = -7, 11, 5
    iota = QuadInt(2, 1, d)
    gamma = QuadInt(4, 1, d)
    b = hensel_root_of_unity(k, q, 4, 3)
    alpha = gamma * iota**4 + QuadInt(b, 0, d)
    n_value = alpha.norm()
    assert n_value == 6738971
    assert is_probable_prime(n_value)
    assert (n_value - 1) % k == 0
    a = 2
    while pow(a, (n_value - 1) // k, n_value) == 1:
        a += 1
    ctx = TowerContext(n_value, CM7_G, k, a)
    curve = reduce_curve(curve_for_d(load_catalog(), -7), ctx)
    one = QuadInt(1, 0, d)
    return ctx, curve, (alpha**k - one).norm(), (alpha**k + one).norm()


def test_annihilation_under_true_sign():
    # multiplying by the norm of psi^k - 1 kills every point when the sign
    # hypothesis is right; ladders that align a partial identity abort with
    # NotInvertible and count as retries, never as nonzero outcomes
    ctx, curve, a_plus, a_minus = corpus_context()
    completed = 0
    for seed in range(20):
        Q = random_point(curve, ctx, seed)
        assert Q is not None
        try:
            R = ec_scalar_mul(a_plus, Q, curve, ctx)
        except NotInvertible:
            continue
        assert classify_zero(R, ctx) == ZERO
        completed += 1
    assert completed >= 2


def test_wrong_sign_never_annihilates():
    ctx, curve, a_plus, a_minus = corpus_context()
    nonzero = 0
    for seed in range(8):
        Q = random_point(curve, ctx, seed)
        assert Q is not None
        try:
            R = ec_scalar_mul(a_minus, Q, curve, ctx)
        except NotInvertible:
            continue
        assert classify_zero(R, ctx) == STRONGLY_NONZERO
        nonzero += 1
    assert nonzero >= 4


def test_constants_are_distinct():
    assert len({ZERO, STRONGLY_NONZERO, AMBIGUOUS}) == 3
