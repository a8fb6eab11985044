import itertools
from collections import defaultdict
from fractions import Fraction

import pytest

from bottcher import new_distribution
from bottcher.laplace import scaling_function
from bottcher.tail import tail_function

LAWS = {
    "two_three": {2: 0.5, 3: 0.5},
    "two_five": {2: 0.2, 5: 0.8},
    "one_two": {1: 0.5, 2: 0.5},
}


@pytest.fixture(scope="session")
def laws():
    return {name: new_distribution(p) for name, p in LAWS.items()}


@pytest.fixture(scope="session")
def d23(laws):
    return laws["two_three"]


@pytest.fixture(scope="session")
def d25(laws):
    return laws["two_five"]


@pytest.fixture(scope="session")
def d12(laws):
    return laws["one_two"]


@pytest.fixture(scope="session")
def sf23(d23):
    return scaling_function(d23)


@pytest.fixture(scope="session")
def tf23(sf23):
    return tail_function(sf23)


@pytest.fixture(scope="session")
def tf25(d25):
    return tail_function(d25)


def brute_force_pmf(pmf: dict, n: int) -> dict:
    """Law of Z_n by enumerating every offspring assignment generation by generation."""
    law = {1: 1.0}
    items = list(pmf.items())
    for _ in range(n):
        nxt = defaultdict(float)
        for z, pz in law.items():
            for combo in itertools.product(items, repeat=z):
                prob = pz
                total = 0
                for k, p in combo:
                    prob *= p
                    total += k
                nxt[total] += prob
        law = dict(nxt)
    return law


def rational_pmf(pmf: dict, n: int) -> dict:
    """Exact law of Z_n in rational arithmetic, adding one individual at a time.

    This is the same answer as full enumeration, organised so that
    generations of a few hundred individuals stay cheap.
    """
    step = {k: Fraction(p) for k, p in pmf.items()}
    law = {1: Fraction(1)}
    for _ in range(n):
        nxt = defaultdict(Fraction)
        partial = {0: Fraction(1)}
        for z in range(1, max(law) + 1):
            grown = defaultdict(Fraction)
            for s, ps in partial.items():
                for k, pk in step.items():
                    grown[s + k] += ps * pk
            partial = grown
            if z in law:
                for s, ps in partial.items():
                    nxt[s] += law[z] * ps
        law = dict(nxt)
    return law


def brute_force_support(pmf: dict, n: int) -> set:
    sup = {1}
    for _ in range(n):
        nxt = set()
        for z in sup:
            sums = {0}
            for _ in range(z):
                sums = {s + k for s in sums for k in pmf}
            nxt |= sums
        sup = nxt
    return sup


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
