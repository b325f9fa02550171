from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hurwitz_polytopes.poly_core import MonicPolynomial

ACCEPTANCE_LINES: list[str] = []


def rationals(min_value=-10, max_value=10, max_denominator=50):
    return st.fractions(min_value=Fraction(min_value), max_value=Fraction(max_value), max_denominator=max_denominator)


@st.composite
def monic_polys(draw, min_degree=1, max_degree=6, coeffs=None):
    n = draw(st.integers(min_degree, max_degree))
    values = draw(st.lists(coeffs if coeffs is not None else rationals(), min_size=n, max_size=n))
    return MonicPolynomial(tuple(values))


@pytest.fixture
def acceptance_log():
    def log(criterion: str, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
