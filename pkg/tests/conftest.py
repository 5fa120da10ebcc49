from pathlib import Path

import pytest

from citedisrupt.graph import build_graph
from oracle import FIVE_EDGES, FIVE_NODES

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def five_graph():
    g, _ = build_graph(FIVE_NODES, FIVE_EDGES)
    return g


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
