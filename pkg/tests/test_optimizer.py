import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitdist.certificate import delta, reference_certificate, validate
from unitdist.numtheory import SplitType, primes_up_to
from unitdist.optimizer import (
    EmptySearchError,
    SearchConfig,
    SearchResult,
    build_certificate,
    candidate_T_sets,
    eligible_SQ,
    heuristic_k,
    heuristic_R,
    local_search,
    optimize,
)

REF_T = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)
REF_SQ = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 47, 71, 79, 97, 101, 107, 109, 139, 151, 163, 167, 179)
REF_K = {
    2: 50, 3: 31, 5: 21, 7: 17, 11: 14, 13: 13, 17: 12, 19: 11, 23: 10, 29: 10, 47: 8,
    71: 7, 79: 7, 97: 7, 101: 7, 107: 7, 109: 7, 139: 6, 151: 6, 163: 6, 167: 6, 179: 6,
}


def k_oracle(p, t):
    # largest k with (1 + 1/k)^t >= p, by direct search
    k = 0
    while (1 + 1 / (k + 1)) ** t >= p:
        k += 1
    return k


@pytest.mark.parametrize("p,t,k", [(2, 35.5, 50), (179, 35.5, 6), (2, 1, 1)])
def test_heuristic_k_examples(p, t, k):
    assert heuristic_k(p, t) == k


@pytest.mark.parametrize("t,R", [(35.5, 72), (0.5, 2), (1, 3)])
def test_heuristic_R_examples(t, R):
    assert heuristic_R(t) == R


def test_heuristic_k_against_search_oracle():
    for t in (0.7, 3, 10.5, 35.5, 80):
        for p in primes_up_to(300):
            assert heuristic_k(p, t) == k_oracle(p, t), (p, t)


def test_heuristic_k_monotone_grid():
    ts = [0.5 * i for i in range(1, 200)]
    ps = primes_up_to(500)
    for t in ts[::7]:
        ks = [heuristic_k(p, t) for p in ps]
        assert all(a >= b for a, b in zip(ks, ks[1:]))
    for p in ps[::9]:
        ks = [heuristic_k(p, t) for t in ts]
        assert all(a <= b for a, b in zip(ks, ks[1:]))


def test_heuristic_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        heuristic_k(2, 0)
    with pytest.raises(ValueError):
        heuristic_R(-1)


def test_eligible_SQ_reference():
    table = {el.p: el for el in eligible_SQ(REF_T, 179)}
    for p in REF_SQ:
        assert table[p].eligible
        assert table[p].split_in_Q is not SplitType.SPLIT


def test_eligible_SQ_small_T():
    table = {el.p: el for el in eligible_SQ((3,), 50)}
    assert table[13].eligible
    assert table[5].eligible
    # 11 = 3 mod 4 and 3 is a square mod 11
    assert not table[11].eligible


def test_build_certificate_reproduces_reference():
    cert = build_certificate(REF_T, REF_SQ, 35.5)
    assert cert.k == REF_K
    assert cert.R == 72
    assert cert.SQ == REF_SQ
    assert cert == reference_certificate()


def test_build_certificate_small_t():
    with pytest.raises(ValueError):
        build_certificate(REF_T, REF_SQ, 0.1)
    cert = build_certificate(REF_T, REF_SQ, 20)
    assert all(cert.k[p] <= REF_K[p] for p in cert.SQ)
    assert sum(cert.k.values()) < sum(REF_K.values())
    assert validate(cert).valid


def test_candidate_T_sets_contains_reference_T():
    sets = candidate_T_sets(61)
    assert REF_T in sets
    for T in sets:
        assert sum(q % 4 == 3 for q in T) % 2 == 1
        assert len(T) + 1 <= (len(T) - 1) ** 2 / 4
    assert candidate_T_sets(3) == []


def test_optimize_covers_reference_recipe():
    res = optimize(SearchConfig(t_grid=[35.5], T_max=43, SQ_bound=179, local_search=False))
    assert res.best_delta.delta >= 0.014114
    assert res.best == reference_certificate()


def test_optimize_empty():
    with pytest.raises(EmptySearchError):
        optimize(SearchConfig(T_max=3))


@pytest.fixture(scope="module")
def small_runs():
    base = dict(t_grid=[15, 25, 35.5, 50], T_max=53, SQ_bound=220, seed=3)
    return (
        optimize(SearchConfig(local_search=False, **base)),
        optimize(SearchConfig(local_search=True, **base)),
        optimize(SearchConfig(local_search=True, **base)),
    )


def test_local_search_never_hurts(small_runs):
    plain, hill, _ = small_runs
    assert hill.best_delta.delta >= plain.best_delta.delta


def test_optimize_deterministic(small_runs):
    _, a, b = small_runs
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


def test_trace_running_max(small_runs):
    _, res, _ = small_runs
    best = [max(d for _, d in res.trace[: i + 1]) for i in range(len(res.trace))]
    assert all(x <= y for x, y in zip(best, best[1:]))
    assert best[-1] == pytest.approx(res.best_delta.delta, rel=1e-15)


def test_optimize_output_valid(small_runs):
    for res in small_runs:
        assert validate(res.best).valid
        assert res.best_delta == delta(res.best)


def test_local_search_on_reference_improves():
    cert, steps = local_search(reference_certificate(), seed=0)
    assert delta(cert).delta > 0.014114
    assert [d for _, d in steps] == sorted(d for _, d in steps)
    assert validate(cert).valid


def test_result_roundtrip(small_runs):
    res = small_runs[1]
    again = SearchResult.from_dict(json.loads(json.dumps(res.to_dict())))
    assert again.best == res.best
    assert again.best_delta == res.best_delta
    assert again.trace == res.trace


def test_config_roundtrip_and_rejection():
    cfg = SearchConfig(t_grid=[1.5, 2], T_max=50, SQ_bound=90, local_search=False, seed=4)
    assert SearchConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    with pytest.raises(ValueError):
        SearchConfig.from_dict({"bogus": 1})
    for bad in (dict(t_grid=[]), dict(t_grid=[0.0]), dict(T_max=2), dict(SQ_bound=1)):
        with pytest.raises(ValueError):
            SearchConfig(**bad)


@given(st.floats(1, 100))
def test_build_certificate_R(t):
    cert = build_certificate(REF_T, REF_SQ, t)
    assert cert.R == 2 * t + 1
    assert all(cert.k[p] == math.floor(1 / (p ** (1 / t) - 1)) for p in cert.SQ)
