import itertools

import pytest
from hypothesis import strategies as st

from domkit.poset import FinPoset, antichain, chain, poset_from_order, unit

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def diamond():
    return poset_from_order("diamond", ["b", "l", "r", "t"],
                            lambda x, y: x == y or x == "b" or y == "t")


def vee():
    return poset_from_order("vee", ["b", "l", "r"], lambda x, y: x == y or x == "b")


def wedge():
    return poset_from_order("wedge", ["l", "r", "t"], lambda x, y: x == y or y == "t")


@pytest.fixture
def small_posets():
    return [unit(), chain(2), chain(3), antichain(2), antichain(3),
            diamond(), vee(), wedge()]


@st.composite
def posets(draw, max_size=4):
    """Random poset with labels respecting the order (a linear extension),
    built from hypothesis booleans so failures shrink."""
    n = draw(st.integers(min_value=1, max_value=max_size))
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.tuples(*([st.booleans()] * len(slots))))
    rel = {s for s, b in zip(slots, bits) if b}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    elements = [f"x{i}" for i in range(n)]
    m = bytearray(n * n)
    for i in range(n):
        m[i * n + i] = 1
    for i, j in rel:
        m[i * n + j] = 1
    return FinPoset("random", elements, bytes(m))


@st.composite
def poset_with_subset(draw, max_size=4):
    P = draw(posets(max_size))
    members = [x for x in P.elements if draw(st.booleans())]
    return P, members
