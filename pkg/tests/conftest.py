import numpy as np
import pytest

from quatwave.packet import SpectralParams, default_grid, synthesize
from quatwave.step import Kinematics

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def kin():
    """The reference scenario: E0 = 2 V0, a sqrt(2 m V0)/hbar = 100."""
    return Kinematics.from_ratio(2.0, 100.0)


@pytest.fixture(scope="session")
def sp(kin):
    return SpectralParams.for_kinematics(kin)


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def fields(kin, sp, grid):
    """Memoized synthesize() on the default grid."""
    cache = {}

    def get(case, component, tau):
        key = (case, component, round(tau, 12))
        if key not in cache:
            cache[key] = synthesize(sp, kin, case, component, tau, grid)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20061115)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
