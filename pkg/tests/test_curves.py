"""Catalog loading, the reduction gate, and point-count validation.

The point-count tests are the authority on the catalog: for split primes p
where the curve has good reduction, |E(F_p)| must equal p + 1 -+ Tr(pi) with
p = pi * conj(pi).  Every entry, including the degree-8 d = -17 one, has to
survive that against brute-force counting before anything downstream trusts
its data.
"""

from math import isqrt

import pytest

from cmprime.curves import (
    DEFAULT_CATALOG,
    CatalogError,
    CurveSpec,
    curve_by_id,
    curve_for_d,
    good_reduction_check,
    load_catalog,
    recompute_disc_norm,
    reduce_curve,
)
from cmprime.ntheory import SMALL_PRIMES
from cmprime.tower import TowerContext


def catalog():
    return load_catalog(DEFAULT_CATALOG)


def count_affine_plus_one(p, A, B):
    """|{y^2 = x^3 + Ax + B over F_p}| + point at infinity, brute force."""
    sq = [0] * p
    for y in range(p):
        sq[y * y % p] += 1
    return 1 + sum(sq[(x * x * x + A * x + B) % p] for x in range(p))


def principal_trace(d, p):
    """Tr of a generator of a prime above p, or None if p is not split
    principal.  Solves the principal norm form directly, so class-group
    structure is bypassed rather than assumed."""
    if d % 4 == 1:
        # p = a^2 + ab + (1-d)/4 b^2 and Tr(a + b(1+sqrt(d))/2) = 2a + b
        for b in range(1, p):
            rem = 4 * p + d * b * b
            if rem < 0:
                return None
            s = isqrt(rem)
            if s * s == rem and (s - b) % 2 == 0:
                return s
        return None
    # p = a^2 + (-d) b^2 and Tr(a + b sqrt(d)) = 2a
    for b in range(1, p):
        rem = p + d * b * b
        if rem < 0:
            return None
        a = isqrt(rem)
        if a * a == rem:
            return 2 * a
    return None


def project(elem, root, p):
    return sum(c * pow(root, i, p) for i, c in enumerate(elem)) % p


def reduced_curve_at_root(spec, p, root):
    ctx = TowerContext(p, spec.g_H, 1, 1)
    curve = reduce_curve(spec, ctx)
    return project(curve.a4, root, p), project(curve.a6, root, p)


# ---- loading and schema


def test_default_catalog_loads():
    specs = catalog()
    assert len(specs) >= 6
    assert len({s.id for s in specs}) == len(specs)
    ds = {s.d for s in specs}
    assert {-7, -11, -19, -43, -67, -163} <= ds
    assert -17 in ds


def test_stretch_entry_shape():
    spec = curve_by_id(catalog(), "cm17")
    assert spec is not None
    assert spec.class_number == 4
    assert len(spec.g_H) == 9
    assert spec.a1 == (0,) and spec.a2 == (0,) and spec.a3 == (0,)


def test_curve_for_d_prefers_file_order():
    specs = catalog()
    assert curve_for_d(specs, -7).id == "cm7"
    assert curve_for_d(specs, -5) is None


def test_empty_catalog_rejected(tmp_path):
    f = tmp_path / "empty.toml"
    f.write_text("")
    with pytest.raises(CatalogError, match="no curve entries"):
        load_catalog(f)


def write_single_entry(tmp_path, **overrides):
    fields = {
        "id": '"x7"',
        "d": -7,
        "class_number": 1,
        "g_H": [2, -1, 1],
        "a1": [1],
        "a2": [-1],
        "a3": [0],
        "a4": [-2],
        "a6": [-1],
        "disc_norm": '"117649"',
    }
    fields.update(overrides)
    lines = ["[[curve]]"] + [f"{k} = {v}" for k, v in fields.items() if v is not None]
    f = tmp_path / "one.toml"
    f.write_text("\n".join(lines) + "\n")
    return f


def test_single_entry_roundtrip(tmp_path):
    specs = load_catalog(write_single_entry(tmp_path))
    assert specs[0].disc_norm == 117649
    assert specs[0].g_H == (2, -1, 1)


def test_duplicate_id_rejected(tmp_path):
    f = write_single_entry(tmp_path)
    f.write_text(f.read_text() * 2)
    with pytest.raises(CatalogError, match=r"curve\[1\].id: duplicate"):
        load_catalog(f)


def test_unknown_field_rejected(tmp_path):
    f = write_single_entry(tmp_path, conductor=1)
    with pytest.raises(CatalogError, match="conductor: unknown"):
        load_catalog(f)


def test_missing_field_rejected(tmp_path):
    f = write_single_entry(tmp_path, a6=None)
    with pytest.raises(CatalogError, match=r"curve\[0\].a6: missing"):
        load_catalog(f)


def test_bad_disc_norm_string_rejected(tmp_path):
    f = write_single_entry(tmp_path, disc_norm='"12x"')
    with pytest.raises(CatalogError, match="decimal string"):
        load_catalog(f)


def test_non_integer_array_rejected(tmp_path):
    f = write_single_entry(tmp_path, a4="[1.5]")
    with pytest.raises(CatalogError, match=r"a4: expected a nonempty integer array"):
        load_catalog(f)


def test_invariant_violation_names_field(tmp_path):
    f = write_single_entry(tmp_path, g_H=[2, -1, 3])
    with pytest.raises(CatalogError, match=r"curve\[0\].g_H: must be monic"):
        load_catalog(f)


def test_spec_invariants_direct():
    good = dict(
        id="t", d=-7, class_number=1, g_H=(2, -1, 1),
        a1=(0,), a2=(0,), a3=(0,), a4=(1,), a6=(1,), disc_norm=5,
    )
    CurveSpec(**good)
    with pytest.raises(ValueError, match="negative and squarefree"):
        CurveSpec(**{**good, "d": -12})
    with pytest.raises(ValueError, match="negative and squarefree"):
        CurveSpec(**{**good, "d": 7})
    with pytest.raises(ValueError, match="degree 2"):
        CurveSpec(**{**good, "class_number": 2})
    with pytest.raises(ValueError, match="a4: degree"):
        CurveSpec(**{**good, "a4": (0, 1, 2)})
    with pytest.raises(ValueError, match="disc_norm"):
        CurveSpec(**{**good, "disc_norm": 0})
    with pytest.raises(ValueError, match="quadratic field presentation"):
        CurveSpec(**{**good, "g_H": (-7, 0, 1)})
    # trailing zeros in coefficient arrays are insignificant
    assert CurveSpec(**{**good, "a4": (1, 0)}).a4 == (1,)


# ---- reduction gate


def test_gate_ok_and_witness_and_bad():
    spec = curve_for_d(catalog(), -7)  # disc_norm = 7^6, disc(g_H) = -7
    assert good_reduction_check(spec, 10**9 + 7).status == "ok"
    gate = good_reduction_check(spec, 7 * 13)
    assert gate.status == "composite_witness" and gate.witness == 7
    assert good_reduction_check(spec, 7).status == "bad_reduction"
    with pytest.raises(ValueError):
        good_reduction_check(spec, 1)


def test_gate_catches_nonetale_coefficient_ring():
    # disc_norm is clean but g_H is ramified at 7: the gate must still flag it
    spec = CurveSpec(
        id="t", d=-7, class_number=1, g_H=(2, -1, 1),
        a1=(0,), a2=(0,), a3=(0,), a4=(1,), a6=(1,), disc_norm=25,
    )
    assert spec.g_H_disc == -7
    gate = good_reduction_check(spec, 7 * 13)
    assert gate.status == "composite_witness" and gate.witness == 7


def test_gate_on_every_shipped_entry():
    n = 10**12 + 39  # prime, far from all shipped discriminant factors
    for spec in catalog():
        assert good_reduction_check(spec, n).status == "ok"


# ---- reduction to short form


def test_reduce_requires_matching_g_H():
    specs = catalog()
    ctx = TowerContext(101, curve_for_d(specs, -7).g_H, 1, 1)
    with pytest.raises(ValueError, match="g_H"):
        reduce_curve(curve_for_d(specs, -11), ctx)


def test_reduce_requires_six_invertible():
    spec = curve_for_d(catalog(), -7)
    with pytest.raises(ValueError, match="6"):
        reduce_curve(spec, TowerContext(3 * 43, spec.g_H, 1, 1))


def test_reduce_matches_integer_invariants():
    # constant-coefficient entries pass straight through the c-invariant
    # formulas: compare against plain integer arithmetic under a huge modulus
    spec = curve_for_d(catalog(), -11)
    (a1,), (a2,), (a3,), (a4,), (a6,) = spec.a1, spec.a2, spec.a3, spec.a4, spec.a6
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    n = 10**40 + 121
    curve = reduce_curve(spec, TowerContext(n, spec.g_H, 1, 1))
    assert curve.a4 == ((-27 * c4) % n, 0)
    assert curve.a6 == ((-54 * c6) % n, 0)


def test_reduce_commutes_with_quotients():
    spec = curve_for_d(catalog(), -7)
    p, q = 53, 149
    big = reduce_curve(spec, TowerContext(p * q, spec.g_H, 1, 1))
    small = reduce_curve(spec, TowerContext(p, spec.g_H, 1, 1))
    assert tuple(c % p for c in big.a4) == small.a4
    assert tuple(c % p for c in big.a6) == small.a6


# ---- point-count validation of the shipped catalog


def split_primes_with_roots(spec, how_many):
    out = []
    for p in SMALL_PRIMES:
        if p < 5 or good_reduction_check(spec, p).status != "ok":
            continue
        tr = principal_trace(spec.d, p)
        if tr is None:
            continue
        roots = [r for r in range(p) if sum(c * pow(r, i, p) for i, c in enumerate(spec.g_H)) % p == 0]
        if not roots:
            continue
        out.append((p, tr, roots))
        if len(out) == how_many:
            return out
    raise AssertionError(f"not enough split primes below 1000 for {spec.id}")


@pytest.mark.parametrize("d", [-7, -11, -19, -43, -67, -163])
def test_point_counts_class_number_one(d):
    spec = curve_for_d(catalog(), d)
    for p, tr, roots in split_primes_with_roots(spec, 20):
        for r in roots:
            A, B = reduced_curve_at_root(spec, p, r)
            count = count_affine_plus_one(p, A, B)
            assert count in (p + 1 - tr, p + 1 + tr), (d, p, r, count, tr)


def test_point_counts_stretch_entry():
    spec = curve_by_id(catalog(), "cm17")
    # split principal primes p = a^2 + 17 b^2; non-principal split primes have
    # no root of g_H mod p and cannot occur here
    for p, (a, b) in {53: (6, 1), 149: (9, 2), 157: (2, 3)}.items():
        assert a * a + 17 * b * b == p
        tr = 2 * a
        roots = [r for r in range(p) if sum(c * pow(r, i, p) for i, c in enumerate(spec.g_H)) % p == 0]
        assert len(roots) == 8, "split principal primes split completely"
        for r in roots:
            A, B = reduced_curve_at_root(spec, p, r)
            count = count_affine_plus_one(p, A, B)
            assert count in (p + 1 - tr, p + 1 + tr), (p, r, count, tr)


def test_nonprincipal_split_prime_sees_no_root():
    spec = curve_by_id(catalog(), "cm17")
    # 3 splits in Q(sqrt(-17)) (since -17 = 1 mod 3) but 3 != a^2 + 17b^2;
    # the class field sees that as g_H staying rootless
    assert pow(-17 % 3, (3 - 1) // 2, 3) == 1
    assert principal_trace(-17, 3) is None
    roots = [r for r in range(3) if sum(c * pow(r, i, 3) for i, c in enumerate(spec.g_H)) % 3 == 0]
    assert roots == []


# ---- stored discriminant norms


def test_disc_norm_recompute_matches_storage():
    for spec in catalog():
        assert recompute_disc_norm(spec) == spec.disc_norm, spec.id
