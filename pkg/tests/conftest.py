import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from treedecomp.graph import load_graph  # noqa: E402
from treedecomp.tree import auto_root, label_tree  # noqa: E402

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def c4():
    return load_graph([("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")])


@pytest.fixture
def p3_centre():
    """2-edge path x-c-y rooted at its centre (centre in T_A)."""
    return label_tree([("x", "c"), ("c", "y")], "c")


@pytest.fixture
def p3_leaf():
    """2-edge path rooted at leaf u in T_B: t_0=u, t_1=v (centre, T_A), t_2=w."""
    return label_tree([("u", "v"), ("v", "w")], "u", "B")


@pytest.fixture
def p5_end():
    """4-edge path t_0..t_4 rooted at an end lying in T_B."""
    return label_tree([("p0", "p1"), ("p1", "p2"), ("p2", "p3"), ("p3", "p4")], "p0", "B")


@pytest.fixture
def p5_auto():
    return auto_root([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")])
