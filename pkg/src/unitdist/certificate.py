"""Tower certificates: hypothesis checks and evaluation of the exponent delta."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

import jsonschema

from .numtheory import SplitType, is_prime, split_type

# Above this exponent sum, log1p(exp(-s)) underflows to zero in double precision.
_LOG1P_CUTOFF = 700.0

CERTIFICATE_SCHEMA = {
    "type": "object",
    "properties": {
        "T": {"type": "array", "items": {"type": "integer"}},
        "SQ": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"p": {"type": "integer"}, "k": {"type": "integer"}},
                "required": ["p", "k"],
                "additionalProperties": False,
            },
        },
        "R": {"type": "number"},
        "t": {"type": "number"},
    },
    "required": ["T", "SQ", "R"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class TowerCertificate:
    """The tuple (T, S_Q, k, R).

    T and S_Q are stored ascending; k maps each prime of S_Q to its exponent.
    ``t`` optionally records the heuristic parameter the certificate came from.
    """

    T: tuple[int, ...]
    SQ: tuple[int, ...]
    k: Mapping[int, int]
    R: float
    t: float | None = None

    def __post_init__(self):
        T = tuple(sorted(int(q) for q in self.T))
        SQ = tuple(sorted(int(p) for p in self.SQ))
        if len(set(T)) != len(T):
            raise ValueError("T contains duplicates")
        if len(set(SQ)) != len(SQ):
            raise ValueError("S_Q contains duplicates")
        if not T:
            raise ValueError("T must be nonempty")
        k = {int(p): int(v) for p, v in self.k.items()}
        if set(k) != set(SQ):
            raise ValueError("k must be defined exactly on S_Q")
        bad = [p for p, v in k.items() if v < 1]
        if bad:
            raise ValueError(f"k(p) must be >= 1, violated at {bad}")
        if not self.R > 1:
            raise ValueError(f"R must exceed 1, got {self.R}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "SQ", SQ)
        object.__setattr__(self, "k", dict(sorted(k.items())))
        object.__setattr__(self, "R", float(self.R))

    @property
    def T_product(self) -> int:
        return math.prod(self.T)

    def to_dict(self) -> dict:
        doc = {
            "T": list(self.T),
            "SQ": [{"p": p, "k": self.k[p]} for p in self.SQ],
            "R": self.R,
        }
        if self.t is not None:
            doc["t"] = self.t
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "TowerCertificate":
        jsonschema.validate(doc, CERTIFICATE_SCHEMA)
        return cls(
            T=tuple(doc["T"]),
            SQ=tuple(e["p"] for e in doc["SQ"]),
            k={e["p"]: e["k"] for e in doc["SQ"]},
            R=doc["R"],
            t=doc.get("t"),
        )

    def summary(self) -> str:
        ks = ",".join(f"{p}:{self.k[p]}" for p in self.SQ)
        return f"T={list(self.T)} SQ={{{ks}}} R={self.R:g}"


def load_certificate(path) -> TowerCertificate:
    with open(path) as fh:
        return TowerCertificate.from_dict(json.load(fh))


def reference_certificate() -> TowerCertificate:
    """The certificate bundled as ``data/reference.json``."""
    text = resources.files("unitdist").joinpath("data/reference.json").read_text()
    return TowerCertificate.from_dict(json.loads(text))


@dataclass(frozen=True)
class RamificationProfile:
    e: dict[int, int]
    f: dict[int, int]
    split_in_Q: dict[int, bool]


@dataclass
class Check:
    name: str
    passed: bool
    diagnostic: str = ""


@dataclass
class ValidationReport:
    valid: bool
    checks: list[Check]
    infinitude_lhs: int
    infinitude_rhs: Fraction

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [
                {"name": c.name, "passed": c.passed, "diagnostic": c.diagnostic}
                for c in self.checks
            ],
            "infinitudeLHS": self.infinitude_lhs,
            "infinitudeRHS": str(self.infinitude_rhs),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ValidationReport":
        return cls(
            valid=doc["valid"],
            checks=[Check(c["name"], c["passed"], c["diagnostic"]) for c in doc["checks"]],
            infinitude_lhs=doc["infinitudeLHS"],
            infinitude_rhs=Fraction(doc["infinitudeRHS"]),
        )


@dataclass
class DeltaReport:
    numerator: float
    denominator: float
    delta: float
    lam: float
    per_prime_numerator: dict[int, float] = field(default_factory=dict)
    per_prime_denominator: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "delta": float(f"{self.delta:.6g}"),
            "deltaFull": self.delta,
            "lambda": self.lam,
            "perPrimeNumerator": {str(p): v for p, v in self.per_prime_numerator.items()},
            "perPrimeDenominator": {str(p): v for p, v in self.per_prime_denominator.items()},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DeltaReport":
        return cls(
            numerator=doc["numerator"],
            denominator=doc["denominator"],
            delta=doc["deltaFull"],
            lam=doc["lambda"],
            per_prime_numerator={int(p): v for p, v in doc["perPrimeNumerator"].items()},
            per_prime_denominator={int(p): v for p, v in doc["perPrimeDenominator"].items()},
        )


def _split_in_Q(p: int, D: int) -> bool:
    return split_type(p, D) is SplitType.SPLIT


def infinitude_sides(T, SQ, n_split: int) -> tuple[int, Fraction]:
    lhs = len(T) + len(SQ) + n_split + 1
    rhs = Fraction((len(T) - 1) ** 2, 4)
    return lhs, rhs


def sq_prime_admissible(p: int, T) -> bool:
    """p is 1 mod 4, or inert in Q(sqrt(q)) for some q in T."""
    if p % 4 == 1:
        return True
    return any(split_type(p, q) is SplitType.INERT for q in T)


def validate(cert: TowerCertificate) -> ValidationReport:
    checks = []

    bad_T = [q for q in cert.T if q % 2 == 0 or not is_prime(q)]
    bad_SQ = [p for p in cert.SQ if not is_prime(p)]
    primality_ok = not bad_T and not bad_SQ
    diag = ""
    if bad_T:
        diag += f"T entries not odd primes: {bad_T}. "
    if bad_SQ:
        diag += f"S_Q entries not prime: {bad_SQ}."
    checks.append(Check("primality", primality_ok, diag.strip()))

    n3 = sum(1 for q in cert.T if q % 4 == 3)
    checks.append(
        Check("parity", n3 % 2 == 1, f"{n3} elements of T are 3 mod 4")
    )

    if primality_ok:
        bad = [p for p in cert.SQ if not sq_prime_admissible(p, cert.T)]
        checks.append(
            Check(
                "admissibility",
                not bad,
                f"not 1 mod 4 and not inert in any Q(sqrt(q)): {bad}" if bad else "",
            )
        )
        D = cert.T_product
        n_split = sum(1 for p in cert.SQ if _split_in_Q(p, D))
    else:
        checks.append(Check("admissibility", False, "skipped: primality failed"))
        n_split = 0

    lhs, rhs = infinitude_sides(cert.T, cert.SQ, n_split)
    checks.append(Check("infinitude", lhs <= rhs, f"{lhs} <= {rhs}"))

    return ValidationReport(
        valid=all(c.passed for c in checks),
        checks=checks,
        infinitude_lhs=lhs,
        infinitude_rhs=rhs,
    )


def ramification_index(p: int, T) -> int:
    return 2 if p == 2 or p in T else 1


def ramification_profile(cert: TowerCertificate) -> RamificationProfile:
    D = cert.T_product
    e = {p: ramification_index(p, cert.T) for p in cert.SQ}
    f = {p: 2 for p in cert.SQ}
    split = {p: _split_in_Q(p, D) for p in cert.SQ}
    return RamificationProfile(e=e, f=f, split_in_Q=split)


def relative_root_discriminant(T) -> float:
    """sqrt(4 * prod T), from the exact integer product."""
    return math.sqrt(4 * math.prod(T))


def log_denominator(R: float, log_sum: float) -> float:
    """log(2R * P + 1) given log P = log_sum, without forming P."""
    s = math.log(2 * R) + log_sum
    if s > _LOG1P_CUTOFF:
        return s
    return s + math.log1p(math.exp(-s))


def delta_general(SQ, k, e, f, lam: float, R: float) -> DeltaReport:
    if not lam > 1:
        raise ValueError(f"lambda must exceed 1, got {lam}")
    if not R > 1:
        raise ValueError(f"R must exceed 1, got {R}")
    per_num = {}
    per_den = {}
    for p in sorted(SQ):
        if k[p] < 1 or e[p] < 1 or f[p] < 1:
            raise ValueError(f"k, e, f must be positive at p={p}")
        per_num[p] = math.log(k[p] + 1) / (2 * e[p] * f[p])
        per_den[p] = k[p] * math.log(p) / (2 * e[p])
    log_lam = math.log(lam)
    numerator = (
        math.log1p(-1 / R)
        + 0.5 * math.log(2 * math.pi / math.e)
        + math.fsum(per_num.values())
        - log_lam / 4
        - math.log(log_lam) / 2
    )
    denominator = log_denominator(R, math.fsum(per_den.values()))
    return DeltaReport(
        numerator=numerator,
        denominator=denominator,
        delta=numerator / denominator,
        lam=lam,
        per_prime_numerator=per_num,
        per_prime_denominator=per_den,
    )


def delta(cert: TowerCertificate) -> DeltaReport:
    report = validate(cert)
    if not report.valid:
        raise ValueError(f"invalid certificate, failed checks: {report.failed()}")
    prof = ramification_profile(cert)
    return delta_general(
        cert.SQ, cert.k, prof.e, prof.f, relative_root_discriminant(cert.T), cert.R
    )


def relative_class_number_bound(rd: float, d: int) -> float:
    """Upper bound for the relative class number h^-(K) in terms of rd_{K/F} and d = [F:Q]."""
    if not rd > 1:
        raise ValueError(f"rd must exceed 1, got {rd}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return 8 * rd**2 * (math.sqrt(rd) * math.log(rd) * math.e / (4 * math.pi)) ** d
