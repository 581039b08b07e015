"""Primality proving for quadratic-norm sequences via CM elliptic curves.

The package decides members N = norm(gamma iota^n + b_n) of configurable
integer sequences: a randomized curve test produces replayable primality
certificates, a residue-lattice scan completes each proof by ruling out
small-norm divisors, and deterministic Miller-Rabin plus trial division
cover everything the curve route cannot reach. All randomness is derived
from caller-supplied seeds.
"""

from .certificate import Certificate, CertificateError, parse_certificate
from .curves import curve_by_id, load_catalog
# note: the prove() convenience alias is not re-exported because binding it
# here would shadow the cmprime.prove submodule attribute
from .prove import (
    Verdict,
    VerifyResult,
    baseline_prove,
    las_vegas_test,
    prove_pipeline,
    verify_certificate,
)
from .quadratic import QuadInt
from .sequences import SequenceParams, gen_alpha, validate_params

__all__ = [
    "Certificate",
    "CertificateError",
    "parse_certificate",
    "curve_by_id",
    "load_catalog",
    "Verdict",
    "VerifyResult",
    "baseline_prove",
    "las_vegas_test",
    "prove_pipeline",
    "verify_certificate",
    "QuadInt",
    "SequenceParams",
    "gen_alpha",
    "validate_params",
]
