import itertools
import random

import networkx as nx
import pytest
from hypothesis import strategies as st

from lna.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    for u, v, w in g.weighted_edges():
        out.add_edge(u, v, weight=w)
    return out


def from_nx(h: nx.Graph) -> Graph:
    return Graph(h.nodes, h.edges)


@st.composite
def graphs(draw, min_n=1, max_n=8, connected=False, weighted=False):
    """Small simple graphs; vertex ids 0..n-1."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
        chosen = sorted(set(chosen) | {(p, i) for i, p in zip(range(1, n), parents)})
    if weighted:
        return Graph(range(n), [(u, v, draw(st.integers(1, 5))) for u, v in chosen])
    return Graph(range(n), chosen)


def small_corpus(count=60, max_n=8, seed=7):
    """Fixed corpus of connected graphs with at most ``max_n`` vertices."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(3, max_n)
        p = rng.uniform(0.25, 0.8)
        h = nx.gnp_random_graph(n, p, seed=rng.randrange(10**9))
        if nx.is_connected(h):
            out.append(from_nx(h))
    return out


@pytest.fixture
def triangle():
    return Graph(range(3), [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return Graph(range(4), [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def c4():
    return Graph(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        if name not in _acceptance or report.failed:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    import sys

    module = next((m for k, m in sys.modules.items() if k.endswith("test_acceptance")), None)
    if module is None:
        return
    terminalreporter.section("acceptance")
    for name, label in module.CHECKS.items():
        if name not in _acceptance:
            continue
        verdict = "PASS" if _acceptance[name] == "passed" else "FAIL"
        note = module.NOTES.get(name)
        terminalreporter.write_line(f"{verdict}  {label}" + (f"  ({note})" if note else ""))
