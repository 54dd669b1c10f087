from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from dgmatch.graph import new_graph

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, max_n=8, distinct=False, rational=False):
    """Random simple graphs with positive exact weights."""
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if rational:
        weight = st.builds(Fraction, st.integers(1, 20), st.integers(1, 4))
    else:
        weight = st.integers(1, 6)
    if distinct:
        ws = draw(st.lists(st.integers(1, 1000), min_size=len(chosen), max_size=len(chosen), unique=True))
    else:
        ws = draw(st.lists(weight, min_size=len(chosen), max_size=len(chosen)))
    return new_graph(n, [(a, b, w) for (a, b), w in zip(chosen, ws)])


@pytest.fixture
def p4():
    return new_graph(4, [(0, 1, 2), (1, 2, 3), (2, 3, 2)])


@pytest.fixture
def star3():
    return new_graph(4, [(0, 1, 1), (0, 2, 2), (0, 3, 3)])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
