import numpy as np
import pytest

from bootperc.graph import Graph
from bootperc.weights import build_weights


@pytest.fixture(scope="session")
def ws1000():
    return build_weights(1000, 2.5, 2 / 3, 1.0)


@pytest.fixture(scope="session")
def ws_big():
    return build_weights(100_000, 2.5, 2 / 3, 1.0)


def complete(n):
    iu, ju = np.triu_indices(n, k=1)
    return Graph.from_edges(n, iu, ju)


def path(n):
    return Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))


def star(leaves):
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=int), np.arange(1, leaves + 1))


def random_graph(gen, n, p):
    iu, ju = np.triu_indices(n, k=1)
    keep = gen.random(iu.size) < p
    return Graph.from_edges(n, iu[keep], ju[keep])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
