from fractions import Fraction

import pytest
from hypothesis import strategies as st

from jacobi_threshold import Potential

ACCEPTANCE_LINES: list[str] = []


def rationals(lo=-5, hi=5, max_den=50):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_den)


def potentials(min_n=1, max_n=8, lo=-5, hi=5, max_den=50):
    return st.lists(rationals(lo, hi, max_den), min_size=min_n, max_size=max_n).map(Potential)


@pytest.fixture
def F():
    return Fraction


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
