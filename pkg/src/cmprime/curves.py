"""Catalog of CM elliptic curves and the good-reduction gate.

Each catalog entry fixes a curve E over a degree-2h number field H, given as
Weierstrass coefficients that are integer polynomials in a primitive element t
with monic minimal polynomial g_H.  Entries also store the norm of the curve
discriminant down to Q, so that checking gcd(N, disc_norm) = 1 certifies good
reduction of E at every prime of H above a prime divisor of N.  The gate also
takes gcd(N, disc(g_H)): a candidate sharing a factor with either quantity is
composite, and a candidate divisible by the whole thing cannot use this curve.

The shipped catalog (data/catalog.toml) carries the six class-number-one
discriminants with classical rational models plus a class-number-four entry
for d = -17 whose coefficients live in a degree-8 field.  Catalog data is
trusted only as far as load-time invariant checks; the test suite re-derives
disc_norm symbolically and brute-force counts points at split primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .ntheory import int_poly_discriminant, int_poly_resultant, is_squarefree
from .tower import TowerContext

DEFAULT_CATALOG = Path(__file__).resolve().parent / "data" / "catalog.toml"

_FIELDS = ("id", "d", "class_number", "g_H", "a1", "a2", "a3", "a4", "a6", "disc_norm")


class CatalogError(ValueError):
    """Catalog file violates the schema; the message names the field."""


def _strip_poly(coeffs) -> tuple:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class CurveSpec:
    """One catalog entry: a CM curve over H with its reduction data.

    Coefficient polynomials are constant-first integer tuples in t, reduced
    mod g_H (degree strictly below deg g_H).  disc_norm is the exact integer
    N_{H/Q}(disc E); its sign is whatever the norm gives.
    """

    id: str
    d: int
    class_number: int
    g_H: tuple
    a1: tuple
    a2: tuple
    a3: tuple
    a4: tuple
    a6: tuple
    disc_norm: int

    def __post_init__(self):
        for name in ("g_H", "a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _strip_poly(getattr(self, name)))
        if not self.id:
            raise ValueError("id: must be a nonempty string")
        if self.d >= 0 or not is_squarefree(self.d):
            raise ValueError("d: must be negative and squarefree")
        if self.class_number < 1:
            raise ValueError("class_number: must be positive")
        deg = len(self.g_H) - 1
        if self.g_H[-1] != 1 or deg != 2 * self.class_number:
            raise ValueError("g_H: must be monic of degree 2 * class_number")
        for name in ("a1", "a2", "a3", "a4", "a6"):
            if len(getattr(self, name)) - 1 >= deg:
                raise ValueError(f"{name}: degree must be below deg g_H")
        if self.disc_norm == 0:
            raise ValueError("disc_norm: must be nonzero")
        if self.class_number == 1:
            # the primitive element must be sqrt(d), or (1+sqrt(d))/2 when
            # d = 1 mod 4, so that t-constant entries mean what they say
            allowed = [(-self.d, 0, 1)]
            if self.d % 4 == 1:
                allowed.append(((1 - self.d) // 4, -1, 1))
            if self.g_H not in allowed:
                raise ValueError("g_H: unexpected quadratic field presentation")

    @property
    def g_H_disc(self) -> int:
        return int_poly_discriminant(list(self.g_H))


@dataclass(frozen=True)
class ReductionGate:
    """Outcome of the good-reduction check for a candidate N."""

    status: str  # "ok" | "composite_witness" | "bad_reduction"
    witness: int | None = None


def good_reduction_check(spec: CurveSpec, n_value: int) -> ReductionGate:
    """Gate a candidate N against the curve's discriminant data.

    A proper common factor with disc_norm or disc(g_H) proves N composite and
    is returned as a witness.  If N divides one of them outright the curve is
    unusable for this N (reduction is bad, or the coefficient ring is not
    etale) and the caller must fall back; N's primality stays undecided.
    """
    if n_value <= 1:
        raise ValueError("candidate must exceed 1")
    whole = False
    for quantity in (spec.disc_norm, spec.g_H_disc):
        g = gcd(n_value, quantity)
        if 1 < g < n_value:
            return ReductionGate("composite_witness", g)
        if g == n_value:
            whole = True
    if whole:
        return ReductionGate("bad_reduction")
    return ReductionGate("ok")


@dataclass(frozen=True)
class ShortCurve:
    """y^2 = x^3 + a4 x + a6 with coefficients in (Z/N)[t]/(g_H)."""

    a4: tuple
    a6: tuple


def reduce_curve(spec: CurveSpec, ctx: TowerContext) -> ShortCurve:
    """Reduce the catalog curve mod N and complete it to short form.

    Long-model entries (a1, a2, a3) are absorbed via the c-invariants:
    y^2 = x^3 - 27 c4 x - 54 c6 is the original curve twisted by 6, division
    free, and isomorphic to it whenever 6 is invertible mod N.  The trial
    division preamble guarantees that for every candidate reaching this point;
    the gcd(N, 6) = 1 requirement is still enforced here.
    """
    if tuple(c % ctx.n_value for c in spec.g_H) != ctx.g:
        raise ValueError("curve and tower context disagree on g_H")
    if gcd(ctx.n_value, 6) != 1:
        raise ValueError("short form needs 6 invertible mod N")
    emb = ctx.base_from_coeffs
    a1, a2, a3 = emb(spec.a1), emb(spec.a2), emb(spec.a3)
    a4, a6 = emb(spec.a4), emb(spec.a6)
    mul, add, scl = ctx.base_mul, ctx.base_add, ctx.base_mul_int
    b2 = add(mul(a1, a1), scl(a2, 4))
    b4 = add(scl(a4, 2), mul(a1, a3))
    b6 = add(mul(a3, a3), scl(a6, 4))
    c4 = add(mul(b2, b2), scl(b4, -24))
    c6 = add(add(scl(mul(b2, mul(b2, b2)), -1), scl(mul(b2, b4), 36)), scl(b6, -216))
    return ShortCurve(a4=scl(c4, -27), a6=scl(c6, -54))


def recompute_disc_norm(spec: CurveSpec) -> int:
    """Recompute N_{H/Q}(disc E) from the Weierstrass data, exactly.

    Discriminant algebra happens in Z[t] reduced mod the monic g_H, then the
    norm is the resultant with g_H.  Used to validate catalog entries; runtime
    proving only ever reads the stored value.
    """
    g = list(spec.g_H)
    deg = len(g) - 1

    def red(p):
        p = list(p) + [0] * max(0, deg + 1 - len(p))
        for i in range(len(p) - 1, deg - 1, -1):
            lead = p[i]
            if lead:
                for jdx in range(deg + 1):
                    p[i - deg + jdx] -= lead * g[jdx]
                p[i] = 0
        return p[:deg]

    def mul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if x:
                for jdx, y in enumerate(q):
                    if y:
                        out[i + jdx] += x * y
        return red(out)

    def add(p, q):
        return [x + y for x, y in zip(p, q)]

    def scl(p, c):
        return [x * c for x in p]

    a1, a2, a3 = red(spec.a1), red(spec.a2), red(spec.a3)
    a4, a6 = red(spec.a4), red(spec.a6)
    b2 = add(mul(a1, a1), scl(a2, 4))
    b4 = add(scl(a4, 2), mul(a1, a3))
    b6 = add(mul(a3, a3), scl(a6, 4))
    b8 = add(
        add(mul(b2, a6), scl(mul(a4, a4), -1)),
        add(scl(mul(a1, mul(a3, a4)), -1), mul(a2, mul(a3, a3))),
    )
    delta = add(
        add(scl(mul(mul(b2, b2), b8), -1), scl(mul(b4, mul(b4, b4)), -8)),
        add(scl(mul(b6, b6), -27), scl(mul(b2, mul(b4, b6)), 9)),
    )
    return int_poly_resultant(g, delta)


def load_catalog(path=DEFAULT_CATALOG) -> list:
    """Parse and invariant-check a curve catalog file.

    The schema is strict: every entry carries exactly the known fields, ids
    are unique, and disc_norm is a decimal string (TOML integers stop well
    short of these sizes).
    """
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise CatalogError(f"not valid TOML: {exc}") from exc
    unknown = set(data) - {"curve"}
    if unknown:
        raise CatalogError(f"unknown top-level key {sorted(unknown)[0]!r}")
    entries = data.get("curve")
    if not entries:
        raise CatalogError("catalog has no curve entries")
    specs = []
    seen = set()
    for idx, raw in enumerate(entries):
        where = f"curve[{idx}]"
        if not isinstance(raw, dict):
            raise CatalogError(f"{where}: not a table")
        for key in _FIELDS:
            if key not in raw:
                raise CatalogError(f"{where}.{key}: missing")
        for key in raw:
            if key not in _FIELDS:
                raise CatalogError(f"{where}.{key}: unknown field")
        if type(raw["id"]) is not str:
            raise CatalogError(f"{where}.id: expected a string")
        for key in ("d", "class_number"):
            if type(raw[key]) is not int:
                raise CatalogError(f"{where}.{key}: expected an integer")
        for key in ("g_H", "a1", "a2", "a3", "a4", "a6"):
            val = raw[key]
            if type(val) is not list or not val or any(type(c) is not int for c in val):
                raise CatalogError(f"{where}.{key}: expected a nonempty integer array")
        dn = raw["disc_norm"]
        if type(dn) is not str or not dn.lstrip("-").isdigit():
            raise CatalogError(f"{where}.disc_norm: expected a decimal string")
        if raw["id"] in seen:
            raise CatalogError(f"{where}.id: duplicate {raw['id']!r}")
        seen.add(raw["id"])
        try:
            specs.append(
                CurveSpec(
                    id=raw["id"],
                    d=raw["d"],
                    class_number=raw["class_number"],
                    g_H=tuple(raw["g_H"]),
                    a1=tuple(raw["a1"]),
                    a2=tuple(raw["a2"]),
                    a3=tuple(raw["a3"]),
                    a4=tuple(raw["a4"]),
                    a6=tuple(raw["a6"]),
                    disc_norm=int(dn),
                )
            )
        except ValueError as exc:
            raise CatalogError(f"{where}.{exc}") from exc
    return specs


def curve_for_d(catalog, d: int) -> CurveSpec | None:
    """First catalog entry for discriminant root d, in file order."""
    for spec in catalog:
        if spec.d == d:
            return spec
    return None


def curve_by_id(catalog, curve_id: str) -> CurveSpec | None:
    for spec in catalog:
        if spec.id == curve_id:
            return spec
    return None
