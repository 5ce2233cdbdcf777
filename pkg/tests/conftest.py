import numpy as np
import pytest

from mqedrates import scenario


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hene():
    return scenario.hene_dataset()


def rel(a, b):
    """Relative difference with a guard for b == 0."""
    return abs(a - b) / max(abs(b), 1e-300)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
