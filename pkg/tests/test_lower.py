from __future__ import annotations

import itertools
import logging
import random

import networkx as nx
import pytest

from twbounds.common import Termination
from twbounds.graph import Graph, GraphError
from twbounds.lower import (
    contract_min_degree,
    degeneracy_order,
    delta2d,
    improve_graph,
    lbn,
    lbn_plus,
    least_c_neighbor,
    mmd,
    mmd_plus,
    run_lower_bound,
)
from twbounds.oracle import brute_degeneracy, brute_delta2_degeneracy, exact_treewidth
from twbounds.synthetic import erdos_renyi

from .conftest import clique, cycle, grid, ids, labels, random_graph, random_small_graphs, random_tree

LOWER_BOUNDS = ["mmd", "mmd+", "delta2d", "lbn:mmd", "lbn:mmd+", "lbn:delta2d",
                "lbn+:mmd", "lbn+:mmd+", "lbn+:delta2d"]


def test_mmd_on_example(example):
    assert mmd(example).value == 2
    trace = degeneracy_order(example)
    # Ties go to the smallest id; the first three removals are forced.
    assert labels(example, [v for v, _ in trace[:3]]) == [7, 1, 6]
    assert max(d for _, d in trace) == 2


def test_mmd_simple_families():
    rng = random.Random(0)
    assert mmd(random_tree(rng, 30)).value == 1
    assert mmd(clique(6)).value == 5
    assert mmd(Graph(0)).value == 0


def test_delta2d_examples(example):
    assert delta2d(clique(4)).value == 3
    assert delta2d(Graph(6, [(0, i) for i in range(1, 6)])).value == 1
    # {2,3,4,5,6} has degrees 3,3,3,3,2, so the second-smallest degree is 3.
    assert delta2d(example).value == 3 == brute_delta2_degeneracy(example)
    with pytest.raises(GraphError):
        delta2d(Graph(1))


def test_delta2d_work_cap_skips_with_warning(caplog):
    g = erdos_renyi(200, 0.05, seed=1)
    with caplog.at_level(logging.WARNING):
        r = delta2d(g, work_cap=10)
    assert r.terminated_by is Termination.SKIPPED
    assert "work cap" in caplog.text


def test_mmd_plus_examples(example):
    assert mmd_plus(clique(5)).value == 4
    assert mmd_plus(random_tree(random.Random(4), 25)).value == 1
    assert mmd_plus(example).value == 3
    g4 = mmd_plus(grid(4, 4)).value
    assert 2 <= g4 <= 4  # a k-by-k grid has treewidth k


def test_least_c_neighbor_prefers_fewest_common_neighbors():
    # 0 sees 1, 2, 3; 1-2 is an edge, so 3 shares nothing with 0.
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    assert least_c_neighbor(g, 0) == 3
    assert least_c_neighbor(Graph(3, [(0, 1), (0, 2)]), 0) == 1  # tie -> smaller id
    assert contract_min_degree(g) == 1  # vertex 3 (degree 1) merges into 0
    assert 3 not in g


def test_improve_graph_examples(example):
    h = improve_graph(example, 2)
    added = set(h.edges()) - set(example.edges())
    assert added == {tuple(ids(3, 5))}
    assert improve_graph(clique(3), 2) == clique(3)
    # K2,3 closes to K5 at k=1: the left pair shares 3 neighbors, then each
    # right pair shares the two left vertices.
    k23 = Graph(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    assert improve_graph(k23, 1) == clique(5)
    with pytest.raises(ValueError):
        improve_graph(example, -1)


def test_improve_graph_is_a_unique_fixpoint():
    rng = random.Random(8)
    for _ in range(30):
        g = random_graph(rng, 9, 0.5)
        k = rng.randint(0, 3)
        h = improve_graph(g, k)
        for u, v in itertools.combinations(range(9), 2):
            if not h.has_edge(u, v):
                assert len(h.neighbors(u) & h.neighbors(v)) < k + 1
        # closure from a reversed relabelling gives the same edge set
        perm = list(range(8, -1, -1))
        g2 = Graph(9, [(perm[a], perm[b]) for a, b in g.edges()])
        h2 = improve_graph(g2, k)
        assert sorted(tuple(sorted((perm[a], perm[b]))) for a, b in h2.edges()) == sorted(h.edges())


def test_lbn_examples(example):
    r = lbn(example, "mmd")
    assert r.value == 3 and r.history == [2, 3]
    assert lbn(random_tree(random.Random(2), 20), "mmd").value == 1
    assert lbn(cycle(4), "mmd").value == 2
    assert run_lower_bound(example, "lbn:mmd").algorithm == "lbn(mmd)"


def test_lbn_plus_examples(example):
    assert lbn_plus(example, "mmd").value == 3
    assert lbn_plus(clique(4), "mmd").value == 3
    for base in ("mmd", "mmd+", "delta2d"):
        assert lbn_plus(random_tree(random.Random(3), 15), base).value == 1


def test_unknown_specs_rejected(example):
    with pytest.raises(ValueError):
        run_lower_bound(example, "lbn:nope")
    with pytest.raises(ValueError):
        run_lower_bound(example, "magic")


@pytest.mark.parametrize("spec", LOWER_BOUNDS)
def test_lower_bounds_sound_against_oracle(spec):
    for g in random_small_graphs(80, seed=5):
        r = run_lower_bound(g, spec)
        assert 0 <= r.value <= max(g.n - 1, 0)
        assert r.value <= exact_treewidth(g)


def test_lbn_dominates_its_base():
    for g in random_small_graphs(60, seed=6):
        for base in ("mmd", "mmd+", "delta2d"):
            b = run_lower_bound(g, base).value
            assert lbn(g, base).value >= b
            assert lbn_plus(g, base).value >= b


def test_degeneracy_matches_networkx_on_larger_graphs():
    for seed in range(3):
        g = erdos_renyi(3000, 0.003, seed=seed)
        ng = nx.Graph(list(g.edges()))
        ng.add_nodes_from(g.vertices())
        assert mmd(g).value == max(nx.core_number(ng).values())


def test_delta2d_matches_brute_force_and_dominates_mmd():
    for g in random_small_graphs(120, n_range=(2, 8), seed=7):
        d2 = delta2d(g).value
        assert d2 == brute_delta2_degeneracy(g)
        assert d2 >= mmd(g).value == brute_degeneracy(g)


def test_lower_bounds_respect_budget():
    g = erdos_renyi(20000, 0.0005, seed=3)
    for spec in ("mmd", "mmd+", "lbn:mmd", "lbn+:mmd"):
        r = run_lower_bound(g, spec, budget=1e-6)
        assert r.terminated_by is Termination.TIMEOUT
        assert r.elapsed < 1.0
    # a cut-short peel has seen a prefix of the full run
    assert run_lower_bound(g, "mmd", budget=1e-6).value <= mmd(g).value
