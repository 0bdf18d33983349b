import functools

import pytest

from sunitsolve.generators import find_generators_bruteforce
from sunitsolve.places import PlaceSet, maximal_order_field


@functools.lru_cache(maxsize=None)
def field(coeffs: tuple):
    return maximal_order_field(list(coeffs))


@functools.lru_cache(maxsize=None)
def basis(coeffs: tuple, primes: tuple):
    K = field(coeffs)
    return find_generators_bruteforce(K, PlaceSet.above(K, list(primes)))


@functools.lru_cache(maxsize=None)
def solved(coeffs: tuple, primes: tuple, mode: str = "both"):
    from sunitsolve.sieve import solve

    return solve(basis(coeffs, primes), mode=mode)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long running (minutes)")


@pytest.fixture
def qsqrt2():
    return basis((-2, 0, 1), (2,))


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for ac in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[ac])
