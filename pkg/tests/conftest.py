import pytest

from ramverify.bounds import BoundParams
from ramverify.prime_engine import build_sieve
from ramverify.ramanujan_core import build_table, sieve_for_index

CORO_MAX = 688383

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def small_sieve():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def table_100():
    return build_table(100)


@pytest.fixture(scope="session")
def full_table():
    """R_n for n <= 688383 together with its sieve (to p_{4 * 688383})."""
    return build_table(CORO_MAX)


@pytest.fixture(scope="session")
def dusart_sieve():
    return sieve_for_index(2 * 10**6)


@pytest.fixture
def corollary():
    return BoundParams.corollary()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
