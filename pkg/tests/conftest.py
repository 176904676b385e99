import math

import pytest

from legendre_phase.chart import DomainSpec
from legendre_phase.modes import ModeSpec
from legendre_phase.radial import closed_form_integer


def integer_mode(n, **kw):
    return ModeSpec(closed_form_integer(n), **kw)


@pytest.fixture
def mode2():
    return integer_mode(2)


@pytest.fixture
def mode3():
    return integer_mode(3)


@pytest.fixture
def disk08():
    return DomainSpec(0.8, 2 * math.pi)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
