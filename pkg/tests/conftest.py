import pytest

from treezeta.graph_core import make_graph


@pytest.fixture
def segment():
    """1-segment c -a-> d with both weights 3."""
    return make_graph(["c", "d"], [("a", "ab", "c", "d", 3, 3)])


@pytest.fixture
def loop():
    return make_graph(["c"], [("a", "ab", "c", "c", 3, 3)])


def segment_graph(wa, wb):
    return make_graph(["c", "d"], [("a", "ab", "c", "d", wa, wb)])


def loop_graph(wa, wb):
    return make_graph(["c"], [("a", "ab", "c", "c", wa, wb)])


DATA = __import__("pathlib").Path(__file__).resolve().parents[1] / "data"

# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
