"""Ceiling on the exponent reachable by the class-field-tower method.

For c > 0 define

    g(c) = -(c/2) log 2 - log 2 + c log(1 - 1/(c+1)) - log(c+1)
           + 1/2 * sum_p max_{k >= 0} (c log(k+1) - k log p).

Whenever g(c) <= 0 the method cannot produce an exponent above 1 + 1/c.
Only primes p < 2^c contribute to the sum; for p >= 2^c the maximum is 0.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np

from .numtheory import primes_up_to

DEFAULT_PRIME_LIMIT = 1 << 22
DEFAULT_GRID_STEP = 0.01
DEFAULT_TOL = 1e-8


def _increment(c: float, k: int, logp: float) -> float:
    # change in c log(k+1) - k log p when going from k to k+1
    return c * math.log((k + 2) / (k + 1)) - logp


def best_k_for_prime(p: int, c: float) -> tuple[int, float]:
    """Smallest maximizer and maximum of k -> c log(k+1) - k log p over k >= 0.

    The increments decrease strictly in k, so the first k whose increment is
    <= 0 is the smallest maximizer. The scan starts from the closed-form
    estimate floor(1/(p^(1/c) - 1)) and walks to the exact switch point.
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    logp = math.log(p)
    k = max(0, int(1 / math.expm1(logp / c)) - 1)
    while k > 0 and _increment(c, k - 1, logp) <= 0:
        k -= 1
    while _increment(c, k, logp) > 0:
        k += 1
    return k, c * math.log(k + 1) - k * logp


def _constant_terms(c: float) -> float:
    return (
        -(c / 2) * math.log(2)
        - math.log(2)
        + c * math.log1p(-1 / (c + 1))
        - math.log(c + 1)
    )


def contributing_primes(c: float, prime_limit: int = DEFAULT_PRIME_LIMIT) -> tuple[list[int], bool]:
    """Primes p <= 2^c, capped at prime_limit; the flag says whether the cap bit."""
    top = 2.0**c
    exact = top <= prime_limit
    bound = int(top) if exact else prime_limit
    return primes_up_to(bound), exact


def g_with_terms(c: float, prime_limit: int = DEFAULT_PRIME_LIMIT):
    """Return (g(c), {p: (kStar, value)}, exact).

    When 2^c exceeds prime_limit the prime sum is truncated; since every
    omitted term is >= 0 the returned value is then a lower bound for g(c).
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    primes, exact = contributing_primes(c, prime_limit)
    terms = {p: best_k_for_prime(p, c) for p in primes}
    value = _constant_terms(c) + 0.5 * math.fsum(v for _, v in terms.values())
    return value, terms, exact


def g(c: float, prime_limit: int = DEFAULT_PRIME_LIMIT) -> float:
    return g_with_terms(c, prime_limit)[0]


@lru_cache(maxsize=4)
def _log_primes(cap: int) -> np.ndarray:
    return np.log(np.array(primes_up_to(cap), dtype=float))


def _g_lower_fast(c: float, cap: int) -> float:
    # vectorized lower bound on g(c) from the primes up to cap
    logp = _log_primes(cap)
    x = 1.0 / np.expm1(logp / c)
    k = np.floor(x)
    # any k gives a lower bound on the per-prime maximum, and k = 0 gives 0
    vals = np.maximum(c * np.log1p(k) - k * logp, 0.0)
    return _constant_terms(c) + 0.5 * float(vals.sum())


def g_is_positive(c: float, prime_limit: int = DEFAULT_PRIME_LIMIT) -> bool:
    """Sign of g(c), certified.

    Cheap truncated sums are lower bounds for g, so a positive partial sum
    settles the sign; otherwise fall back to the exact evaluation.
    """
    for cap in (1000, 100_000):
        if 2.0**c <= cap:
            break
        if _g_lower_fast(c, cap) > 1e-9:
            return True
    value, _, exact = g_with_terms(c, prime_limit)
    if value > 0:
        return True
    if not exact:
        raise ValueError(
            f"cannot certify sign of g({c}): truncated sum at {prime_limit} is not positive"
        )
    return False


@dataclass
class UpperBoundReport:
    c: float
    g_value: float
    bound: float
    per_prime: dict[int, tuple[int, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "gValue": self.g_value,
            "bound": self.bound,
            "perPrime": {
                str(p): {"kStar": k, "value": v} for p, (k, v) in self.per_prime.items()
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "UpperBoundReport":
        return cls(
            c=doc["c"],
            g_value=doc["gValue"],
            bound=doc["bound"],
            per_prime={int(p): (e["kStar"], e["value"]) for p, e in doc["perPrime"].items()},
        )


def report_at(c: float, prime_limit: int = DEFAULT_PRIME_LIMIT) -> UpperBoundReport:
    value, terms, exact = g_with_terms(c, prime_limit)
    if not exact:
        raise ValueError(f"2^c exceeds the prime limit {prime_limit}; per-prime table incomplete")
    return UpperBoundReport(c=c, g_value=value, bound=1 + 1 / c, per_prime=terms)


def exponent_upper_bound(
    c_low: float,
    c_high: float,
    tol: float = DEFAULT_TOL,
    step: float = DEFAULT_GRID_STEP,
) -> UpperBoundReport:
    """Largest c in [c_low, c_high] with g(c) <= 0, located at the last sign change.

    The bracket is scanned on a grid first because g is not known to be
    monotone; the last grid transition from g <= 0 to g > 0 is then bisected.
    """
    if not 0 < c_low < c_high:
        raise ValueError(f"need 0 < c_low < c_high, got [{c_low}, {c_high}]")
    n = max(1, math.ceil((c_high - c_low) / step))
    grid = [c_low + (c_high - c_low) * i / n for i in range(n + 1)]
    positive = [g_is_positive(c) for c in grid]
    last = None
    for i in range(n):
        if not positive[i] and positive[i + 1]:
            last = i
    if last is None:
        raise ValueError(f"g has no sign change from <= 0 to > 0 in [{c_low}, {c_high}]")
    if not positive[-1]:
        raise ValueError(
            f"g({c_high}) <= 0: the crossing lies beyond the bracket, raise c_high"
        )
    lo, hi = grid[last], grid[last + 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g_is_positive(mid):
            hi = mid
        else:
            lo = mid
    return report_at(lo)
