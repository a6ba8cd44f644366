import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=40
)
settings.register_profile("ci", deadline=None, max_examples=15)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from tensorrho import MaxLogSumExp  # noqa: E402


@pytest.fixture
def two_exponent():
    """``log(e^x + e^-x)``, minimum ``log 2`` at 0."""
    return MaxLogSumExp.from_data([([(1,), (-1,)], [1, 1])])


@pytest.fixture
def flat_bottom():
    """``max(0, -x - log 3, x - log 3)``: zero on ``[-log 3, log 3]``."""
    third = Fraction(1, 3)
    return MaxLogSumExp.from_data([([(0,)], [1]), ([(-1,)], [third]), ([(1,)], [third])])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
