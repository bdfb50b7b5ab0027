import math
import random

import pytest

from unitdist.certificate import TowerCertificate, reference_certificate, validate
from unitdist.numtheory import primes_up_to
from unitdist.optimizer import eligible_SQ


@pytest.fixture
def ref():
    return reference_certificate()


def random_valid_certificate(rng: random.Random) -> TowerCertificate:
    """A valid certificate built from a prefix of the odd primes and a random S_Q."""
    odd = primes_up_to(80)[1:]
    while True:
        m = rng.randint(8, 16)
        T = odd[:m]
        if sum(q % 4 == 3 for q in T) % 2 == 0:
            T = T[:-1] if T[-1] % 4 == 3 else [q for q in T if q != max(q for q in T if q % 4 == 3)]
        budget = math.floor((len(T) - 1) ** 2 / 4) - len(T) - 1
        if budget < 1:
            continue
        pool = [el for el in eligible_SQ(T, 300) if el.eligible]
        rng.shuffle(pool)
        SQ = []
        for el in pool:
            cost = 2 if el.split_in_Q.value == "split" else 1
            if cost <= budget:
                SQ.append(el.p)
                budget -= cost
            if rng.random() < 0.1:
                break
        if not SQ:
            continue
        k = {p: rng.randint(1, 40) for p in SQ}
        cert = TowerCertificate(T=tuple(T), SQ=tuple(SQ), k=k, R=rng.uniform(1.01, 200))
        assert validate(cert).valid
        return cert


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, note = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {note}")
