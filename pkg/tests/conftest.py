import random

import pytest

from carlitz import TruncSeries, UInftyElem, UPowerSeries, compute_omega, spec_for_order


@pytest.fixture(scope="session")
def f2():
    return spec_for_order(2)


@pytest.fixture(scope="session")
def f3():
    return spec_for_order(3)


@pytest.fixture(scope="session")
def f4():
    return spec_for_order(4)


_OMEGA_CACHE = {}


def omega_for(q, tprec=8, uprec=128):
    key = (q, tprec, uprec)
    if key not in _OMEGA_CACHE:
        _OMEGA_CACHE[key] = compute_omega(spec_for_order(q), tprec, uprec)
    return _OMEGA_CACHE[key]


def random_series(rng: random.Random, spec, prec, *, unit=False) -> TruncSeries:
    first = rng.randrange(1, spec.q) if unit else rng.randrange(spec.q)
    ranks = [first] + [rng.randrange(spec.q) for _ in range(prec - 1)]
    return TruncSeries.from_ranks(spec, ranks)


def perturb_entry(omega, n, offset=1):
    """Flip one coefficient of omega's entry n, inside its declared window."""
    e = omega.entries[n]
    ranks = list(e.ranks)
    i = min(offset, len(ranks) - 1)
    ranks[i] = (ranks[i] + 1) % e.spec.p if e.spec.e == 1 else ranks[i] ^ 1
    bad = UInftyElem(e.spec, e.val, ranks, e.uprec)
    entries = list(omega.entries)
    entries[n] = bad
    return UPowerSeries(omega.spec, entries)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
