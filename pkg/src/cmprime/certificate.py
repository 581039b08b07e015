"""Primality certificates: a fixed-order text format with a trailing hash.

A certificate records everything needed to replay one successful curve
annihilation run: the sequence parameters, the member index, the curve,
the extension nonresidue, the point seed, the annihilation exponent, the
sign hypothesis, and the residue scan tallies.  Serialization is line
oriented (`key = value`, UTF-8, one newline per line) in a frozen key
order, and the final line carries a sha256 over the exact bytes of every
preceding line.  The parser is strict: wrong order, unknown keys,
duplicates, or a stale hash all reject.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .lattice import ResidueScanRecord
from .quadratic import QuadInt
from .sequences import SequenceParams

FORMAT_VERSION = 1

# serialization order; the hash line always comes last
_KEY_ORDER = (
    "version",
    "N",
    "params_d",
    "params_iota",
    "params_q",
    "params_gamma",
    "params_k",
    "params_b_seed",
    "params_alpha",
    "n",
    "curve_id",
    "a_nonresidue",
    "point_seed",
    "e_q",
    "sign_hypothesis",
    "residue_check",
    "hash",
)


class CertificateError(ValueError):
    """Raised when certificate text fails to parse or its hash is stale."""


def _format_quadint(x: QuadInt) -> str:
    if x.half:
        raise CertificateError("certificate coordinates must be integral")
    return f"{x.num_a},{x.num_b}"


def _parse_quadint(text: str, d: int) -> QuadInt:
    parts = text.split(",")
    if len(parts) != 2:
        raise CertificateError(f"expected two comma separated integers, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise CertificateError(f"bad integer pair {text!r}") from exc
    return QuadInt(a, b, d)


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise CertificateError(f"field {key} is not an integer: {text!r}") from exc


def _format_records(records: tuple[ResidueScanRecord, ...]) -> str:
    if not records:
        raise CertificateError("residue_check must not be empty")
    return ";".join(f"{r.m}:{r.sign:+d}:{r.lift_count}" for r in records)


def _parse_records(text: str) -> tuple[ResidueScanRecord, ...]:
    out = []
    for chunk in text.split(";"):
        parts = chunk.split(":")
        if len(parts) != 3:
            raise CertificateError(f"bad residue_check entry {chunk!r}")
        m = _parse_int("residue_check.m", parts[0])
        if parts[1] not in ("+1", "-1"):
            raise CertificateError(f"bad residue_check sign {parts[1]!r}")
        sign = 1 if parts[1] == "+1" else -1
        count = _parse_int("residue_check.count", parts[2])
        if m < 1 or count < 0:
            raise CertificateError(f"residue_check entry out of range: {chunk!r}")
        out.append(ResidueScanRecord(m, sign, count))
    return tuple(out)


@dataclass(frozen=True)
class Certificate:
    """One replayable witness that N passed the curve test and the finale."""

    n_value: int
    params: SequenceParams
    n: int
    curve_id: str
    a_nonresidue: int
    point_seed: int
    e_q: int
    sign_hypothesis: int
    residue_check: tuple[ResidueScanRecord, ...]
    version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.sign_hypothesis not in (1, -1):
            raise CertificateError("sign_hypothesis must be +1 or -1")
        if self.e_q < 1:
            raise CertificateError("e_q must be at least 1")
        if self.n < 1:
            raise CertificateError("n must be at least 1")
        if not (2 <= self.a_nonresidue < self.n_value):
            raise CertificateError("a_nonresidue out of range")
        if not (0 <= self.point_seed < 1 << 64):
            raise CertificateError("point_seed must fit in 64 bits")

    def _body_fields(self) -> dict[str, str]:
        p = self.params
        return {
            "version": str(self.version),
            "N": str(self.n_value),
            "params_d": str(p.d),
            "params_iota": _format_quadint(p.iota),
            "params_q": str(p.q),
            "params_gamma": _format_quadint(p.gamma),
            "params_k": str(p.k),
            "params_b_seed": str(p.b_seed),
            "params_alpha": str(p.alpha_exponent_threshold),
            "n": str(self.n),
            "curve_id": self.curve_id,
            "a_nonresidue": str(self.a_nonresidue),
            "point_seed": str(self.point_seed),
            "e_q": str(self.e_q),
            "sign_hypothesis": f"{self.sign_hypothesis:+d}",
            "residue_check": _format_records(self.residue_check),
        }

    def serialize(self) -> str:
        body = "".join(f"{k} = {v}\n" for k, v in self._body_fields().items())
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        return body + f"hash = {digest}\n"


def parse_certificate(text: str) -> Certificate:
    """Strict inverse of Certificate.serialize.

    Enforces the frozen key order, rejects unknown or duplicate keys, and
    recomputes the hash over the raw bytes above the hash line.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if len(lines) != len(_KEY_ORDER):
        raise CertificateError(
            f"expected {len(_KEY_ORDER)} lines, got {len(lines)}"
        )
    fields: dict[str, str] = {}
    for line, expected_key in zip(lines, _KEY_ORDER):
        if " = " not in line:
            raise CertificateError(f"malformed line {line!r}")
        key, value = line.split(" = ", 1)
        if key != expected_key:
            raise CertificateError(
                f"expected key {expected_key!r}, found {key!r}"
            )
        fields[key] = value

    body = "".join(f"{k} = {fields[k]}\n" for k in _KEY_ORDER[:-1])
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if fields["hash"] != digest:
        raise CertificateError("hash mismatch")

    version = _parse_int("version", fields["version"])
    if version != FORMAT_VERSION:
        raise CertificateError(f"unsupported version {version}")
    d = _parse_int("params_d", fields["params_d"])
    try:
        alpha = Fraction(fields["params_alpha"])
    except (ValueError, ZeroDivisionError) as exc:
        raise CertificateError("bad params_alpha") from exc
    try:
        params = SequenceParams(
            d=d,
            iota=_parse_quadint(fields["params_iota"], d),
            q=_parse_int("params_q", fields["params_q"]),
            gamma=_parse_quadint(fields["params_gamma"], d),
            k=_parse_int("params_k", fields["params_k"]),
            b_seed=_parse_int("params_b_seed", fields["params_b_seed"]),
            alpha_exponent_threshold=alpha,
        )
    except ValueError as exc:
        raise CertificateError(f"invalid parameters: {exc}") from exc
    if fields["sign_hypothesis"] not in ("+1", "-1"):
        raise CertificateError("sign_hypothesis must be +1 or -1")
    try:
        return Certificate(
            n_value=_parse_int("N", fields["N"]),
            params=params,
            n=_parse_int("n", fields["n"]),
            curve_id=fields["curve_id"],
            a_nonresidue=_parse_int("a_nonresidue", fields["a_nonresidue"]),
            point_seed=_parse_int("point_seed", fields["point_seed"]),
            e_q=_parse_int("e_q", fields["e_q"]),
            sign_hypothesis=1 if fields["sign_hypothesis"] == "+1" else -1,
            residue_check=_parse_records(fields["residue_check"]),
        )
    except CertificateError:
        raise
    except ValueError as exc:
        raise CertificateError(str(exc)) from exc
