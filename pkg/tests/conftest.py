import numpy as np
import pytest

from qweak.ddcore import UniqueTable, from_dense
from oracles import BELL_VECTOR, TRIO_VECTOR, corpus
from qweak.circuit import run

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def table():
    return UniqueTable()


@pytest.fixture
def trio(table):
    return from_dense(TRIO_VECTOR, table)


@pytest.fixture
def bell(table):
    return from_dense(BELL_VECTOR, table)


@pytest.fixture(scope="session")
def corpus_states():
    """(circuit, final DD) pairs for the whole corpus, each on its own table."""
    return [(c, run(c, "dd", table=UniqueTable())) for c in corpus()]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
