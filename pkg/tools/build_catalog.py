#!/usr/bin/env python3
"""Build data/catalog.toml: CM curve data verified by exact arithmetic.

Class-number-one discriminants get classical rational models; the value of j
is recomputed from the Weierstrass coefficients and compared against the known
CM j-invariants, so a typo in a model is caught here, not at proof time.

The d = -17 entry is assembled from the explicit radical value of j in the
degree-8 field H = Q(phi, sqrt(-17)) with phi = sqrt((1+sqrt(17))/2).
All arithmetic is exact (Fraction vectors over a fixed basis of H); the
curve is the short model y^2 = x^3 - 27u^3j*x + 54u^5j with u = j - 1728,
which has j-invariant j and Delta = 6^12*u^9*j^2, verified exactly before
anything is written.  A final twist clears the coordinate denominators.

Run from the repository root:  python3 tools/build_catalog.py
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import lcm
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cmprime.ntheory import int_poly_resultant  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "src" / "cmprime" / "data" / "catalog.toml"

# classical CM j-invariants for class number one
CM_J = {
    -7: -3375,
    -11: -32768,
    -19: -884736,
    -43: -884736000,
    -67: -147197952000,
    -163: -262537412640768000,
}

# classical rational models, CM by the maximal order, [a1, a2, a3, a4, a6]
H1_MODELS = {
    -7: [1, -1, 0, -2, -1],
    -11: [0, -1, 1, -7, 10],
    -19: [0, 0, 1, -38, 90],
    -43: [0, 0, 1, -860, 9707],
    -67: [0, 0, 1, -7370, 243528],
    -163: [0, 0, 1, -2174420, 1234136692],
}


def curve_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, delta


def h1_entries():
    entries = []
    for d in sorted(H1_MODELS, reverse=True):
        a1, a2, a3, a4, a6 = H1_MODELS[d]
        c4, c6, delta = curve_invariants(a1, a2, a3, a4, a6)
        assert delta != 0
        assert c4**3 - c6**2 == 1728 * delta
        assert c4**3 == CM_J[d] * delta, f"model for d={d} has wrong j-invariant"
        assert d % 4 == 1  # all class-number-one d here are 1 mod 4
        g = [(1 - d) // 4, -1, 1]  # minimal polynomial of (1+sqrt(d))/2
        entries.append(
            {
                "id": f"cm{-d}",
                "d": d,
                "class_number": 1,
                "g_H": g,
                "a1": [a1],
                "a2": [a2],
                "a3": [a3],
                "a4": [a4],
                "a6": [a6],
                "disc_norm": str(delta * delta),
            }
        )
    return entries


# ---- exact arithmetic in H = Q(phi, s), phi^4 = phi^2 + 4, s^2 = -17
#
# phi = sqrt((1+sqrt(17))/2) generates the real quartic subfield; the radical
# value of j collapses to an integer polynomial in phi because
# sqrt(3876889241278 + 940283755330*sqrt(17)) = ((1739823 + 421969*sqrt(17))/2) * phi
# (verified exactly in main()).  Elements are 8 Fractions: phi^0..phi^3,
# then s*phi^0..s*phi^3.

DIM = 8


def _phi_mul(p, q):
    prod = [Fraction(0)] * 7
    for i, a in enumerate(p):
        if a:
            for jdx, b in enumerate(q):
                if b:
                    prod[i + jdx] += a * b
    for i in range(6, 3, -1):
        c = prod[i]
        if c:
            prod[i - 2] += c
            prod[i - 4] += 4 * c
            prod[i] = Fraction(0)
    return prod[:4]


def hmul(x, y):
    p0, p1 = x[:4], x[4:]
    q0, q1 = y[:4], y[4:]
    cross = _phi_mul(p1, q1)
    re = [a - 17 * b for a, b in zip(_phi_mul(p0, q0), cross)]
    im = [a + b for a, b in zip(_phi_mul(p0, q1), _phi_mul(p1, q0))]
    return re + im


def hadd(x, y):
    return [a + b for a, b in zip(x, y)]


def hscale(x, c):
    return [a * c for a in x]


def hint(c):
    out = [Fraction(0)] * DIM
    out[0] = Fraction(c)
    return out


def hpow(x, e):
    out = hint(1)
    for _ in range(e):
        out = hmul(out, x)
    return out


def solve_fraction_system(mat, rhs):
    """Solve mat * x = rhs exactly; mat is a list of rows. None if singular."""
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [a / pv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def d17_entry():
    phi = [Fraction(0)] * DIM
    phi[1] = Fraction(1)
    s = [Fraction(0)] * DIM
    s[4] = Fraction(1)
    w = hadd(hscale(hmul(phi, phi), 2), hint(-1))  # sqrt(17) = 2*phi^2 - 1

    # sanity for the tensor arithmetic itself
    assert hmul(w, w) == hint(17)
    assert hmul(s, s) == hint(-17)
    assert hmul(hpow(phi, 2), hpow(phi, 2)) == hadd(hmul(phi, phi), hint(4))

    # v = sqrt(3876889241278 + 940283755330*w) = ((1739823 + 421969*w)/2) * phi
    v = hmul(hscale(hadd(hint(1739823), hscale(w, 421969)), Fraction(1, 2)), phi)
    assert hmul(v, v) == hadd(hint(3876889241278), hscale(w, 940283755330))
    assert all(c.denominator == 1 for c in v)  # lands in Z[phi]

    j = hadd(hint(44552760000), hadd(hscale(w, 10805632000), hscale(v, 32000)))
    assert all(c.denominator == 1 for c in j)
    theta = hadd(phi, s)

    powers = [hint(1)]
    for _ in range(DIM):
        powers.append(hmul(powers[-1], theta))
    mat = [[powers[c][r] for c in range(DIM)] for r in range(DIM)]
    sol = solve_fraction_system(mat, powers[DIM])
    assert sol is not None, "theta = phi + s is not primitive; adjust the combination"
    g = [-c for c in sol] + [Fraction(1)]
    assert all(c.denominator == 1 for c in g), "theta must be an algebraic integer"
    g_H = [int(c) for c in g]

    def rep(y):
        r = solve_fraction_system(mat, y)
        assert r is not None
        return r

    # short model with j-invariant j: y^2 = x^3 + A x + B, A = -27 u^3 j,
    # B = 54 u^5 j, u = j - 1728 (the classical y^2 + uxy = x^3 - 36u^3x - u^5
    # twisted by 6); then c4 = 1296 u^3 j, c6 = -46656 u^5 j, Delta = 6^12 u^9 j^2
    u = hadd(j, hint(-1728))
    A0 = hscale(hmul(hpow(u, 3), j), -27)
    B0 = hscale(hmul(hpow(u, 5), j), 54)
    c4 = hscale(A0, -48)
    c6 = hscale(B0, -864)
    delta = hscale(
        hadd(hscale(hmul(A0, hmul(A0, A0)), 4), hscale(hmul(B0, B0), 27)), -16
    )
    # consistency of the invariant formulas (c4^3 = j*Delta makes j the
    # j-invariant; that j is the CM value is checked by point counts in tests)
    assert delta == hscale(hmul(hpow(u, 9), hmul(j, j)), 6**12)
    assert hmul(c4, hmul(c4, c4)) == hmul(j, delta)
    assert hadd(hmul(c4, hmul(c4, c4)), hscale(hmul(c6, c6), -1)) == hscale(delta, 1728)

    # clear denominators by a further twist: A scales by lambda^4, B by
    # lambda^6, Delta by lambda^12, so per prime p the twist only needs
    # v_p(lambda) = max(ceil(e4/4), ceil(e6/6), ceil(e12/12))
    reps = {4: rep(A0), 6: rep(B0), 12: rep(delta)}
    dens = {i: lcm(*(c.denominator for c in r)) for i, r in reps.items()}
    lam = 1
    while any(pow(lam, i, dens[i]) for i in dens if dens[i] > 1):
        lam += 1
        if lam > 10**6:
            lam = lcm(*dens.values())  # give up on minimality
            break
    coeffs = {}
    for i, r in reps.items():
        scaled = [c * lam**i for c in r]
        assert all(c.denominator == 1 for c in scaled)
        coeffs[i] = [int(c) for c in scaled]

    delta_poly = coeffs[12]
    disc_norm = int_poly_resultant(g_H, delta_poly)
    assert disc_norm != 0

    def strip(vec):
        out = list(vec)
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    return {
        "id": "cm17",
        "d": -17,
        "class_number": 4,
        "g_H": g_H,
        "a1": [0],
        "a2": [0],
        "a3": [0],
        "a4": strip(coeffs[4]),
        "a6": strip(coeffs[6]),
        "disc_norm": str(disc_norm),
    }, lam


def emit(entries):
    lines = ["# CM curve catalog; rebuild with tools/build_catalog.py", ""]
    for e in entries:
        lines.append("[[curve]]")
        lines.append(f'id = "{e["id"]}"')
        lines.append(f"d = {e['d']}")
        lines.append(f"class_number = {e['class_number']}")
        for key in ("g_H", "a1", "a2", "a3", "a4", "a6"):
            lines.append(f"{key} = [{', '.join(str(c) for c in e[key])}]")
        lines.append(f'disc_norm = "{e["disc_norm"]}"')
        lines.append("")
    return "\n".join(lines)


def main():
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(200000)
    entries = h1_entries()
    stretch, lam = d17_entry()
    entries.append(stretch)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(emit(entries))
    print(f"wrote {OUT} ({len(entries)} entries; d=-17 twist scale {lam})")
    gh = stretch["g_H"]
    print(f"d=-17 g_H degree {len(gh) - 1}, coefficient sizes "
          f"{[len(str(abs(c))) for c in gh]} digits")


if __name__ == "__main__":
    main()
