"""Certificate generation from the floor heuristic and a deterministic search for large delta."""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from .certificate import (
    DeltaReport,
    TowerCertificate,
    delta,
    log_denominator,
    ramification_index,
    relative_root_discriminant,
    sq_prime_admissible,
    validate,
)
from .numtheory import SplitType, primes_up_to, split_type

log = logging.getLogger(__name__)

R_STEP = 1.05


def default_t_grid() -> list[float]:
    return [1 + 0.5 * i for i in range(199)]


@dataclass
class SearchConfig:
    t_grid: list[float] = field(default_factory=default_t_grid)
    T_max: int = 61
    SQ_bound: int = 250
    local_search: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.t_grid or any(not t > 0 for t in self.t_grid):
            raise ValueError("t_grid must be nonempty with positive entries")
        if self.T_max < 3 or self.SQ_bound < 3:
            raise ValueError("T_max and SQ_bound must be >= 3")

    def to_dict(self) -> dict:
        return {
            "tGrid": list(self.t_grid),
            "Tmax": self.T_max,
            "SQBound": self.SQ_bound,
            "localSearch": self.local_search,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchConfig":
        known = {"tGrid", "Tmax", "SQBound", "localSearch", "seed"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        kwargs = {}
        if "tGrid" in doc:
            kwargs["t_grid"] = [float(t) for t in doc["tGrid"]]
        if "Tmax" in doc:
            kwargs["T_max"] = int(doc["Tmax"])
        if "SQBound" in doc:
            kwargs["SQ_bound"] = int(doc["SQBound"])
        if "localSearch" in doc:
            kwargs["local_search"] = bool(doc["localSearch"])
        if "seed" in doc:
            kwargs["seed"] = int(doc["seed"])
        return cls(**kwargs)


@dataclass
class SearchResult:
    best: TowerCertificate
    best_delta: DeltaReport
    trace: list[tuple[str, float]]

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "bestDelta": self.best_delta.to_dict(),
            "trace": [{"certificate": s, "delta": d} for s, d in self.trace],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchResult":
        return cls(
            best=TowerCertificate.from_dict(doc["best"]),
            best_delta=DeltaReport.from_dict(doc["bestDelta"]),
            trace=[(e["certificate"], e["delta"]) for e in doc["trace"]],
        )


class EmptySearchError(ValueError):
    """No valid certificate exists in the configured search space."""


def heuristic_k(p: int, t: float) -> int:
    """floor(1 / (p^(1/t) - 1))."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return math.floor(1 / math.expm1(math.log(p) / t))


def heuristic_R(t: float) -> float:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return 2 * t + 1


@dataclass(frozen=True)
class Eligibility:
    p: int
    split_in_Q: SplitType
    eligible: bool


def eligible_SQ(T, bound: int) -> list[Eligibility]:
    D = math.prod(T)
    return [
        Eligibility(p, split_type(p, D), sq_prime_admissible(p, T))
        for p in primes_up_to(bound)
    ]


def build_certificate(T, SQ, t: float) -> TowerCertificate:
    k = {p: heuristic_k(p, t) for p in SQ}
    k = {p: v for p, v in k.items() if v >= 1}
    if not k:
        raise ValueError(f"every k(p) vanishes at t={t}")
    return TowerCertificate(T=tuple(T), SQ=tuple(k), k=k, R=heuristic_R(t), t=t)


def candidate_T_sets(T_max: int) -> list[tuple[int, ...]]:
    """Prefixes of the odd primes, with parity repaired by dropping or extending."""
    odd = [q for q in primes_up_to(T_max) if q > 2]
    out = []
    for m in range(1, len(odd) + 1):
        prefix = odd[:m]
        threes = [q for q in prefix if q % 4 == 3]
        if len(threes) % 2 == 1:
            options = [prefix]
        else:
            options = []
            if threes:
                options.append([q for q in prefix if q != threes[-1]])
            nxt = next((q for q in odd[m:] if q % 4 == 3), None)
            if nxt is not None:
                options.append(prefix + [nxt])
        for T in options:
            T = tuple(T)
            # even an empty S_Q must satisfy the infinitude criterion
            if T and len(T) + 1 <= (len(T) - 1) ** 2 / 4 and T not in out:
                out.append(T)
    return out


@dataclass
class _Candidate:
    p: int
    k: int
    num: float
    den: float
    cost: int


def _greedy(T, pool, t: float) -> TowerCertificate | None:
    """Grow S_Q by largest first-order gain in delta, within the infinitude budget."""
    R = heuristic_R(t)
    lam = relative_root_discriminant(T)
    num = (
        math.log1p(-1 / R)
        + 0.5 * math.log(2 * math.pi / math.e)
        - math.log(lam) / 4
        - math.log(math.log(lam)) / 2
    )
    den_sum = 0.0
    budget = math.floor((len(T) - 1) ** 2 / 4) - len(T) - 1
    cands = []
    for el in pool:
        k = heuristic_k(el.p, t)
        if k < 1:
            continue
        e = ramification_index(el.p, T)
        cost = 2 if el.split_in_Q is SplitType.SPLIT else 1
        cands.append(
            _Candidate(el.p, k, math.log(k + 1) / (4 * e), k * math.log(el.p) / (2 * e), cost)
        )
    chosen = {}
    while True:
        cur = num / log_denominator(R, den_sum)
        best, best_gain = None, 0.0
        for c in cands:
            if c.p in chosen or c.cost > budget:
                continue
            gain = (c.num - cur * c.den) / c.cost
            if gain > best_gain:
                best, best_gain = c, gain
        if best is None:
            break
        chosen[best.p] = best.k
        num += best.num
        den_sum += best.den
        budget -= best.cost
    if not chosen:
        return None
    return TowerCertificate(T=T, SQ=tuple(chosen), k=chosen, R=R, t=t)


def _rank_key(cert: TowerCertificate, d: float):
    return (-d, cert.T, cert.SQ, tuple(cert.k.values()), cert.R)


def local_search(cert: TowerCertificate, seed: int) -> tuple[TowerCertificate, list[tuple[str, float]]]:
    """First-improvement hill climbing over k(p) +- 1 and R scaled by 1.05."""
    rng = random.Random(seed)
    cur, cur_d = cert, delta(cert).delta
    trace = []
    improved = True
    while improved:
        improved = False
        moves = [("k", p, s) for p in cur.SQ for s in (1, -1)] + [("R", None, 1), ("R", None, -1)]
        rng.shuffle(moves)
        for kind, p, s in moves:
            if kind == "k":
                if cur.k[p] + s < 1:
                    continue
                k = dict(cur.k)
                k[p] += s
                nxt = TowerCertificate(T=cur.T, SQ=cur.SQ, k=k, R=cur.R, t=cur.t)
            else:
                R = cur.R * R_STEP if s > 0 else cur.R / R_STEP
                if not R > 1:
                    continue
                nxt = TowerCertificate(T=cur.T, SQ=cur.SQ, k=cur.k, R=R, t=cur.t)
            d = delta(nxt).delta
            if d > cur_d:
                cur, cur_d = nxt, d
                trace.append((cur.summary(), d))
                improved = True
                break
    return cur, trace


def optimize(config: SearchConfig) -> SearchResult:
    trace = []
    best, best_d = None, -math.inf
    for T in candidate_T_sets(config.T_max):
        pool = [el for el in eligible_SQ(T, config.SQ_bound) if el.eligible]
        for t in config.t_grid:
            cert = _greedy(T, pool, t)
            if cert is None or not validate(cert).valid:
                continue
            d = delta(cert).delta
            trace.append((cert.summary(), d))
            if best is None or _rank_key(cert, d) < _rank_key(best, best_d):
                best, best_d = cert, d
    if best is None:
        raise EmptySearchError(f"no valid certificate with T_max={config.T_max}")
    log.info("best heuristic certificate: delta=%.6g", best_d)
    if config.local_search:
        best, steps = local_search(best, config.seed)
        trace.extend(steps)
    report = validate(best)
    if not report.valid:
        raise AssertionError(f"optimizer produced an invalid certificate: {report.failed()}")
    return SearchResult(best=best, best_delta=delta(best), trace=trace)
