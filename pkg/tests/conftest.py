import math

import numpy as np
import pytest

from qent import states

SQRT_HALF = 1 / math.sqrt(2)

ACCEPTANCE_RESULTS = []


@pytest.fixture
def phi_plus():
    return states.density_from_pure(states.bell_state("phi+"))


@pytest.fixture
def psi_plus():
    return states.density_from_pure(states.bell_state("psi+"))


@pytest.fixture
def maximally_mixed():
    return np.eye(4, dtype=complex) / 4


@pytest.fixture
def product_00():
    return states.density_from_pure([1, 0, 0, 0])


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
