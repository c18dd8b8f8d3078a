import random
import sys
from fractions import Fraction

import networkx as nx
import pytest

from hmag.errors import TriangleViolation
from hmag.space import graph_to_metric, validate

HALF_STEPS = [Fraction(k, 2) for k in range(1, 7)]


def random_metric(rng, n, values=HALF_STEPS):
    """Symmetric skeletal metric, rejection-sampled for the triangle inequality."""
    while True:
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i):
                m[i][j] = m[j][i] = rng.choice(values)
        try:
            return validate(m, [chr(ord("a") + i) for i in range(n)])
        except TriangleViolation:
            continue


def criterion1_spaces(count=25, seed=20161):
    rng = random.Random(seed)
    return [random_metric(rng, rng.randint(3, 5)) for _ in range(count)]


def complete_graph(m):
    if m == 1:
        return graph_to_metric([], ["v0"])
    return graph_to_metric([(f"v{i}", f"v{j}") for i in range(m) for j in range(i + 1, m)])


def cycle_graph(m):
    return graph_to_metric([(f"v{i}", f"v{(i + 1) % m}") for i in range(m)])


def path_graph(m):
    if m == 1:
        return graph_to_metric([], ["v0"])
    return graph_to_metric([(f"v{i}", f"v{i + 1}") for i in range(m - 1)])


def nx_to_metric(G):
    return graph_to_metric([(str(u), str(v)) for u, v in G.edges()], [str(v) for v in G.nodes()])


def all_trees(max_n=7, min_n=2):
    out = []
    for n in range(min_n, max_n + 1):
        for T in nx.nonisomorphic_trees(n):
            out.append(nx_to_metric(T))
    return out


@pytest.fixture
def two_point():
    return validate([[0, 1], [1, 0]], ["a", "b"])


@pytest.fixture
def single_point():
    return validate([[0]], ["a"])


@pytest.fixture
def k3():
    return graph_to_metric([("a", "b"), ("b", "c"), ("c", "a")])


@pytest.fixture
def path3():
    return graph_to_metric([("a", "b"), ("b", "c")])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
