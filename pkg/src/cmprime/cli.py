"""Command line front end: prove, scan, verify, bench, lift-residues.

Run configuration lives in a TOML file (curve id, sequence parameters,
seed, attempt budget); flags override the scalar knobs.  All randomness
derives from the single master seed, so identical invocations print
identical results apart from timing columns.

Exit codes: 0 resolved, 1 verification or resolution failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .curves import CurveSpec, curve_by_id, load_catalog
from .lattice import small_norm_lifts
from .ntheory import derive_seed
from .prove import Verdict, las_vegas_test, find_nonresidue, prove_pipeline, verify_certificate
from .quadratic import QuadInt
from .sequences import SequenceParams, gen_alpha
from .tower import FactorFound, TowerContext


class ConfigError(ValueError):
    """Run configuration is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration: where the curve lives and what to test."""

    params: SequenceParams
    curve: CurveSpec
    seed: int = 0
    attempts: int = 4
    allow_fallback: bool = True
    cert_dir: Path = Path("certs")
    bench_sizes: tuple[int, ...] = ()
    label: str = "run"


def _pair(value, name: str) -> tuple[int, int]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise ConfigError(f"{name} must be a pair of integers")
    return value[0], value[1]


def _alpha_fraction(value) -> Fraction:
    # accept "1/20" or a decimal literal; floats go through their string form
    # so 0.05 lands exactly on 1/20
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"alpha: {exc}") from exc
    raise ConfigError("alpha must be a fraction string or a number")


def load_run_config(path) -> RunConfig:
    """Load and cross-check a TOML run configuration.

    The referenced curve id must exist in the catalog and the sequence
    block must satisfy every parameter invariant; both are checked here so
    commands start from a known-good state.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML: {exc}") from exc

    seq = raw.get("sequence")
    if not isinstance(seq, dict):
        raise ConfigError("missing [sequence] table")
    for key in ("d", "iota", "gamma", "k", "b_seed", "curve_id"):
        if key not in seq:
            raise ConfigError(f"sequence.{key} is required")
    d = seq["d"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise ConfigError("sequence.d must be an integer")
    ia, ib = _pair(seq["iota"], "sequence.iota")
    ga, gb = _pair(seq["gamma"], "sequence.gamma")
    try:
        iota = QuadInt(ia, ib, d)
        gamma = QuadInt(ga, gb, d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    alpha = _alpha_fraction(seq.get("alpha", "1/20"))
    try:
        params = SequenceParams(
            d=d,
            iota=iota,
            q=seq.get("q", iota.norm()),
            gamma=gamma,
            k=seq["k"],
            b_seed=seq["b_seed"],
            alpha_exponent_threshold=alpha,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sequence: {exc}") from exc

    catalog_path = raw.get("catalog")
    try:
        catalog = load_catalog(catalog_path) if catalog_path else load_catalog()
    except (OSError, ValueError) as exc:
        raise ConfigError(f"catalog: {exc}") from exc
    curve = curve_by_id(catalog, seq["curve_id"])
    if curve is None:
        raise ConfigError(f"curve id {seq['curve_id']!r} not in catalog")
    if curve.d != d:
        raise ConfigError(
            f"curve {curve.id} is over d={curve.d}, sequence has d={d}"
        )

    sizes = raw.get("bench_sizes", [])
    if not isinstance(sizes, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in sizes
    ):
        raise ConfigError("bench_sizes must be a list of positive integers")
    seed = raw.get("seed", 0)
    attempts = raw.get("attempts", 4)
    for name, val in (("seed", seed), ("attempts", attempts)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise ConfigError(f"{name} must be a non-negative integer")
    if attempts < 1:
        raise ConfigError("attempts must be positive")
    allow_fallback = raw.get("allow_fallback", True)
    if not isinstance(allow_fallback, bool):
        raise ConfigError("allow_fallback must be a boolean")

    return RunConfig(
        params=params,
        curve=curve,
        seed=seed,
        attempts=attempts,
        allow_fallback=allow_fallback,
        cert_dir=Path(raw.get("cert_dir", "certs")),
        bench_sizes=tuple(sizes),
        label=path.stem,
    )


def _resolve_one(config: RunConfig, n: int, seed: int) -> Verdict:
    _, n_value, _ = gen_alpha(config.params, n)
    return prove_pipeline(
        n_value,
        config.params,
        n,
        config.curve,
        rng_seed=seed,
        attempts=config.attempts,
        allow_fallback=config.allow_fallback,
    )


def cmd_prove(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    if args.n < 1:
        raise ConfigError("--n must be at least 1")
    _, n_value, _ = gen_alpha(config.params, args.n)
    print(f"n = {args.n}")
    print(f"N = {n_value} ({len(str(n_value))} digits)")
    try:
        verdict = _resolve_one(config, args.n, derive_seed(config.seed, args.n))
    except LookupError as exc:
        print(f"verdict = unresolved\ndetail = {exc}")
        return 1
    print(f"verdict = {verdict.tag}")
    print(f"method = {verdict.method}")
    if verdict.factor is not None:
        print(f"factor = {verdict.factor}")
    if verdict.detail:
        print(f"detail = {verdict.detail}")
    if verdict.certificate is not None:
        out = Path(args.cert_out) if args.cert_out else (
            config.cert_dir / f"{config.label}_n{args.n}.cert"
        )
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(verdict.certificate, encoding="utf-8")
        print(f"certificate = {out}")
        if args.verify:
            res = verify_certificate(
                out.read_text(encoding="utf-8"), spec=config.curve
            )
            print(f"recheck = {'valid' if res.valid else 'invalid:' + str(res.reason)}")
            if not res.valid:
                return 1
    return 0


def _scan_row(payload):
    config, n, seed = payload
    start = time.perf_counter()
    try:
        _, n_value, _ = gen_alpha(config.params, n)
        verdict = _resolve_one(config, n, seed)
        tag, method = verdict.tag, verdict.method
        digits = len(str(n_value))
    except Exception as exc:  # isolate per-n failures
        tag, method, digits = "error", type(exc).__name__, 0
    return n, digits, tag, method, time.perf_counter() - start


def cmd_scan(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    if args.n_start < 1 or args.n_end < args.n_start - 1:
        raise ConfigError("need 1 <= --n-start and --n-end >= --n-start - 1")
    span = range(args.n_start, args.n_end + 1)
    payloads = [(config, n, derive_seed(config.seed, n)) for n in span]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_row, payloads))
    else:
        rows = [_scan_row(p) for p in payloads]
    print("n\tdigits\tverdict\tmethod\tseconds")
    bad = 0
    for n, digits, tag, method, sec in rows:
        print(f"{n}\t{digits}\t{tag}\t{method}\t{sec:.3f}")
        if tag not in ("prime", "composite"):
            bad += 1
    return 1 if bad else 0


def cmd_verify(args) -> int:
    path = Path(args.certificate)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = verify_certificate(text, catalog_path=args.catalog)
    if result.valid:
        print("valid")
        return 0
    print(f"invalid: {result.reason}")
    return 1


def cmd_bench(args) -> int:
    """Time the curve-test core on growing members; TSV for plotting.

    Each row times the Las Vegas attempt (point draw, cofactor multiply,
    annihilation walk) for one member over several derived seeds.  Retried
    draws are part of the measured cost; the finale and fallback are not
    the scaling subject and stay out.
    """
    config = _apply_overrides(load_run_config(args.config), args)
    sizes = tuple(args.sizes) if args.sizes else config.bench_sizes
    if not sizes:
        raise ConfigError("no bench sizes: set bench_sizes or pass --sizes")
    print("n\tdigits\tseeds\tmean_seconds")
    for n in sizes:
        _, n_value, _ = gen_alpha(config.params, n)
        if (n_value - 1) % config.params.k != 0 or gcd(n_value, 6) != 1:
            raise ConfigError(
                f"bench size n={n}: member fails the tower preconditions"
            )
        a = find_nonresidue(n_value, config.params.k, derive_seed(config.seed, n, 0))
        if a is None:
            raise ConfigError(f"bench size n={n}: no usable nonresidue")
        ctx = TowerContext(n_value, config.curve.g_H, config.params.k, a)
        total = 0.0
        for i in range(args.bench_seeds):
            seed = derive_seed(config.seed, n, i + 1)
            start = time.perf_counter()
            las_vegas_test(
                n_value,
                config.params,
                n,
                config.curve,
                seed,
                a_nonresidue=a,
                ctx=ctx,
            )
            total += time.perf_counter() - start
        print(f"{n}\t{len(str(n_value))}\t{args.bench_seeds}\t{total / args.bench_seeds:.4f}")
    return 0


def cmd_lift_residues(args) -> int:
    try:
        ia, ib = (int(part) for part in args.iota.split(","))
        ba, bb = (int(part) for part in args.beta.split(","))
        iota = QuadInt(ia, ib, args.d)
        beta = QuadInt(ba, bb, args.d)
    except ValueError as exc:
        raise ConfigError(f"bad element: {exc}") from exc
    if iota.is_zero():
        raise ConfigError("iota must be nonzero")
    lifts = small_norm_lifts(iota, beta)
    if not lifts.lifts:
        print("{}")
    else:
        print("{" + ", ".join(str(mu) for mu in lifts.lifts) + "}")
    return 0


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "attempts", None) is not None:
        if args.attempts < 1:
            raise ConfigError("--attempts must be positive")
        updates["attempts"] = args.attempts
    if not updates:
        return config
    from dataclasses import replace

    return replace(config, **updates)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmprime",
        description="Primality proving for quadratic-field norm sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--seed", type=int, default=None, help="master RNG seed")
        p.add_argument(
            "--attempts", type=int, default=None, help="point draws per sign"
        )

    p = sub.add_parser("prove", help="decide one sequence member")
    add_common(p)
    p.add_argument("--n", type=int, required=True, help="member index")
    p.add_argument("--cert-out", default=None, help="certificate output path")
    p.add_argument(
        "--verify", action="store_true", help="re-verify the written certificate"
    )
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("scan", help="decide a range of members")
    add_common(p)
    p.add_argument("--n-start", type=int, required=True)
    p.add_argument("--n-end", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("certificate", help="path to a certificate")
    p.add_argument("--catalog", default=None, help="catalog path override")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the curve test on growing members")
    add_common(p)
    p.add_argument(
        "--sizes",
        type=lambda s: [int(v) for v in s.split(",")],
        default=None,
        help="comma separated member indices",
    )
    p.add_argument(
        "--bench-seeds", type=int, default=5, help="timed seeds per size"
    )
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lift-residues", help="enumerate small-norm residue lifts")
    p.add_argument("--d", type=int, required=True, help="field discriminant root")
    p.add_argument("--iota", required=True, help="modulus element as a,b")
    p.add_argument("--beta", required=True, help="residue element as a,b")
    p.set_defaults(func=cmd_lift_residues)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FactorFound as exc:
        print(f"composite: factor {exc.factor}", file=sys.stderr)
        return 0


if __name__ == "__main__":
    sys.exit(main())
