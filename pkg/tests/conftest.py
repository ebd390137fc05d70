import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from boldplay.core import Stakes


def brute_tail(coeffs, p, t):
    """P(S >= t) by walking every outcome vector with Fraction arithmetic."""
    p, t = Fraction(p), Fraction(t)
    total = Fraction(0)
    for outcome in itertools.product((0, 1), repeat=len(coeffs)):
        s = sum((c for c, b in zip(coeffs, outcome) if b), Fraction(0))
        if s >= t:
            wins = sum(outcome)
            total += p**wins * (1 - p) ** (len(coeffs) - wins)
    return total


@st.composite
def stakes_strategy(draw, max_n=8, max_denominator=64):
    """Stake vectors whose common denominator is at most ``max_denominator``."""
    n = draw(st.integers(1, max_n))
    denom = draw(st.integers(1, max_denominator))
    cuts = sorted(draw(st.lists(st.integers(0, denom), min_size=n - 1, max_size=n - 1)))
    units = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    if not any(units):
        units[0] = denom
    return Stakes(tuple(Fraction(u, denom) for u in units))


fractions_01 = st.builds(
    lambda a, b: Fraction(min(a, b), max(b, 1)), st.integers(0, 20), st.integers(1, 20)
)


@pytest.fixture
def F():
    return Fraction


# acceptance criteria report: filled by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
