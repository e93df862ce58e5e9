"""Shared fixtures: the 7-vertex running example and small random graphs."""

from __future__ import annotations

import itertools
import random
from importlib import resources

import pytest

from twbounds import Graph
from twbounds.io import load_edge_list

# Vertex labels 1..7; ids are label - 1.
RUNNING_EXAMPLE_EDGES = [
    (1, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4), (3, 6), (4, 5), (5, 6), (6, 7),
]


def running_example() -> Graph:
    return Graph(7, [(a - 1, b - 1) for a, b in RUNNING_EXAMPLE_EDGES], labels=list(range(1, 8)))


def ids(*labels: int) -> list[int]:
    return [x - 1 for x in labels]


def labels(g: Graph, vs) -> list:
    return [g.label(v) for v in vs]


def bundled_running_example() -> Graph:
    text = resources.files("twbounds").joinpath("data/running_example.txt").read_text()
    return load_edge_list(text)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def random_small_graphs(count: int, n_range=(4, 10), seed: int = 0):
    """``count`` graphs with n uniform in ``n_range`` and assorted densities."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(*n_range)
        p = rng.choice((0.15, 0.3, 0.45, 0.6, 0.8))
        yield random_graph(rng, n, p)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def clique(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def random_tree(rng: random.Random, n: int) -> Graph:
    return Graph(n, [(v, rng.randrange(v)) for v in range(1, n)])


def grid(rows: int, cols: int) -> Graph:
    g = Graph(rows * cols)
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                g.add_edge(v, v + 1)
            if r + 1 < rows:
                g.add_edge(v, v + cols)
    return g


@pytest.fixture
def example() -> Graph:
    return running_example()


# One line per acceptance criterion, filled in by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
