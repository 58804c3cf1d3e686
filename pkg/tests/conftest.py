import math

import pytest

from phasetransport import ChainSpec, InitialCondition, NearestNeighbor

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def nn_chain():
    def make(n_sites=60, gamma=0.0, strength=1.0):
        return ChainSpec(n_sites, coupling=NearestNeighbor(strength), dephasing_rate=gamma)

    return make


@pytest.fixture
def pure():
    return InitialCondition.pure


HALF_PI = math.pi / 2
