import os

# let the parallel kernels run with several workers even on a single-core host
os.environ.setdefault("NUMBA_NUM_THREADS", "4")

import pytest

from quadtwist.arith import build_tables
from quadtwist.testfn import bump_weight


@pytest.fixture(scope="session")
def tables():
    """Sieve to 2e6: covers X b for X = 1e6 and every prime sum below that."""
    return build_tables(2 * 10 ** 6)


@pytest.fixture(scope="session")
def small_tables():
    return build_tables(10 ** 4)


@pytest.fixture(scope="session")
def bump():
    return bump_weight(1.0, 2.0)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
