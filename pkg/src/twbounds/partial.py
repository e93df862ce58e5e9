"""Partial decompositions: peel a low-width fringe, keep the dense core.

The greedy elimination loop runs as usual but only eliminates vertices whose
current degree is at most ``w``; when none is left the remaining graph,
fill edges included, is the core.  Each fringe tree hangs off the core
through the (clique) neighborhood of its topmost bag.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ._engine import DENSE_LIMIT, make_engine, maybe_densify
from .common import TieBreak
from .decomposition import TreeDecomposition
from .graph import Graph
from .upper import Criterion, _scorer


@dataclass
class PartialDecomposition:
    """Fringe bags of size <= w+1 plus the residual core graph.

    ``fringe_bags[i]`` belongs to ``order[i]``; ``fringe_edges`` link those
    bags into a forest.  ``fragments`` lists, for each fringe tree, its bag
    indices, and ``interfaces[j]`` is the core clique that tree attaches to.
    """

    w: int
    order: list[int]
    fringe_bags: list[np.ndarray]
    fringe_edges: list[tuple[int, int]]
    core: Graph
    fragments: list[list[int]]
    interfaces: list[tuple[int, ...]]
    fill_edges_added: int = 0
    core_edges_original: int = 0

    @property
    def core_vertices(self) -> list[int]:
        return list(self.core.vertices())

    def fringe_width(self) -> int:
        return max((len(b) for b in self.fringe_bags), default=0) - 1

    def assembled(self) -> TreeDecomposition:
        """Full decomposition: the fringe forest under one root bag holding the core."""
        bags = list(self.fringe_bags)
        edges = list(self.fringe_edges)
        if self.core.n:
            root = len(bags)
            bags.append(np.asarray(self.core_vertices, dtype=np.int64))
            for frag, iface in zip(self.fragments, self.interfaces):
                if iface:
                    edges.append((frag[-1], root))
        return TreeDecomposition(bags, edges)

    def covering_bags(self) -> list[np.ndarray]:
        """Fringe bags plus each core vertex's closed neighborhood in the core."""
        bags = list(self.fringe_bags)
        for v in self.core.vertices():
            bags.append(np.asarray(sorted(self.core.neighbors(v) | {v}), dtype=np.int64))
        return bags


@dataclass
class CoreSweepRow:
    w: int
    core_nodes: int
    core_edges: int
    core_edges_original: int
    relative_core_edges: float
    relative_core_edges_original: float

    header = (
        "w",
        "core_nodes",
        "core_edges_with_fill",
        "core_edges_original",
        "relative_with_fill",
        "relative_original",
    )

    def as_csv_row(self) -> tuple:
        return (
            self.w,
            self.core_nodes,
            self.core_edges,
            self.core_edges_original,
            f"{self.relative_core_edges:.6f}",
            f"{self.relative_core_edges_original:.6f}",
        )


def fill_in_edge_budget(w: int) -> int:
    """Most fill edges one elimination of a degree-``w`` vertex can add."""
    if w < 0:
        raise ValueError("w must be non-negative")
    return w * (w - 1) // 2


class _Peeler:
    """Resumable width-bounded elimination over one engine."""

    def __init__(self, g: Graph, criterion: Criterion, tie: TieBreak, dense_limit: int) -> None:
        self.g = g
        self.criterion = criterion
        self.scorer = _scorer(criterion)
        self.keys = tie.keys(g.capacity)
        self.engine = make_engine(g, dense_limit)
        self.dense_limit = dense_limit
        self.order: list[int] = []
        self.nbhds: list[list[int]] = []
        self.fill = 0
        self.core_edges_original = g.m

    def run(self, w: int) -> None:
        e = self.engine
        scorer, keys = self.scorer, self.keys
        current = {}
        heap = []
        for v in e.vertices():
            if e.degree(v) <= w:
                s = scorer(e, v)
                current[v] = s
                heap.append((s, keys[v], v))
        heapq.heapify(heap)
        orig = self.g.adjacency()
        while heap:
            s, _, v = heapq.heappop(heap)
            if not e.is_alive(v) or current.get(v) != s or e.degree(v) > w:
                continue
            self.core_edges_original -= sum(1 for u in orig[v] if e.is_alive(u))
            nbrs, fill = e.eliminate(v)
            self.fill += fill
            self.order.append(v)
            self.nbhds.append(nbrs)
            if self.criterion is Criterion.DEGREE:
                touched = nbrs
            else:
                touched = set(nbrs)
                for u in nbrs:
                    touched.update(e.neighbors(u))
            for u in touched:
                if e.degree(u) <= w:
                    ns = scorer(e, u)
                    if ns != current.get(u):
                        current[u] = ns
                        heapq.heappush(heap, (ns, keys[u], u))
                else:
                    current.pop(u, None)
            e = self.engine = maybe_densify(e, self.dense_limit)

    def snapshot(self, w: int) -> PartialDecomposition:
        position = {v: i for i, v in enumerate(self.order)}
        bags = []
        parent: list[int | None] = []
        edges = []
        interfaces_of: dict[int, tuple[int, ...]] = {}
        for i, (v, nbrs) in enumerate(zip(self.order, self.nbhds)):
            bags.append(np.asarray(sorted([v, *nbrs]), dtype=np.int64))
            inside = [position[x] for x in nbrs if x in position]
            if inside:
                p = min(inside)
                parent.append(p)
                edges.append((i, p))
            else:
                parent.append(None)
                interfaces_of[i] = tuple(nbrs)
        # Fragments: group bags by their topmost ancestor.
        top = list(range(len(bags)))
        for i in range(len(bags) - 1, -1, -1):
            p = parent[i]
            top[i] = i if p is None else top[p]
        members: dict[int, list[int]] = {}
        for i, t in enumerate(top):
            members.setdefault(t, []).append(i)
        roots = sorted(members)
        core = self.engine.to_graph(self.g.labels)
        return PartialDecomposition(
            w=w,
            order=list(self.order),
            fringe_bags=bags,
            fringe_edges=edges,
            core=core,
            fragments=[members[r] for r in roots],
            interfaces=[interfaces_of[r] for r in roots],
            fill_edges_added=self.fill,
            core_edges_original=self.core_edges_original,
        )

    def row(self, w: int) -> CoreSweepRow:
        m0 = self.g.m
        e = self.engine
        return CoreSweepRow(
            w=w,
            core_nodes=e.remaining,
            core_edges=e.edge_count,
            core_edges_original=self.core_edges_original,
            relative_core_edges=e.edge_count / m0 if m0 else 0.0,
            relative_core_edges_original=self.core_edges_original / m0 if m0 else 0.0,
        )


def partial_decompose(
    g: Graph,
    w: int,
    criterion: Criterion | str = Criterion.DEGREE,
    tie: TieBreak | None = None,
    *,
    dense_limit: int = DENSE_LIMIT,
) -> PartialDecomposition:
    """Eliminate greedily among vertices of degree <= ``w`` until none is left.

    The criterion only ranks eligible vertices; eligibility is always by
    current degree, which is what bounds the bag size.  ``w = 0`` removes
    isolated vertices only.
    """
    if w < 0:
        raise ValueError("w must be non-negative")
    peeler = _Peeler(g, Criterion(criterion), tie or TieBreak(), dense_limit)
    peeler.run(w)
    return peeler.snapshot(w)


def core_size_sweep(
    g: Graph,
    w_values,
    criterion: Criterion | str = Criterion.DEGREE,
    tie: TieBreak | None = None,
    *,
    resumable: bool | None = None,
    dense_limit: int = DENSE_LIMIT,
) -> list[CoreSweepRow]:
    """Core size after peeling at each width in ``w_values`` (ascending).

    Under the Degree criterion one peel is resumed from width to width,
    which gives exactly the rows of independent runs: the min-degree vertex
    is eligible at every width it fits, so the larger run repeats the
    smaller one's choices before going further.  Other criteria rerun from
    scratch per width.
    """
    criterion = Criterion(criterion)
    tie = tie or TieBreak()
    ws = list(w_values)
    if ws != sorted(ws):
        raise ValueError("w_values must be ascending")
    if resumable is None:
        resumable = criterion is Criterion.DEGREE
    if resumable and criterion is not Criterion.DEGREE:
        raise ValueError("only the Degree criterion supports a resumable sweep")
    rows = []
    if resumable:
        peeler = _Peeler(g, criterion, tie, dense_limit)
        for w in ws:
            peeler.run(w)
            rows.append(peeler.row(w))
    else:
        for w in ws:
            peeler = _Peeler(g, criterion, tie, dense_limit)
            peeler.run(w)
            rows.append(peeler.row(w))
    return rows


def best_width(rows: list[CoreSweepRow], original: bool = False) -> CoreSweepRow:
    """Row with the smallest core (ties go to the smaller width)."""
    if not rows:
        raise ValueError("empty sweep")
    key = (lambda r: (r.core_edges_original, r.w)) if original else (lambda r: (r.core_edges, r.w))
    return min(rows, key=key)


def within_sqrt_n(n: int, width: int) -> bool:
    """Whether ``width`` is small enough for the core to beat the input size."""
    return width <= math.sqrt(n)


def emptying_width(rows: list[CoreSweepRow]) -> int | None:
    """Smallest swept width whose core is empty, if any."""
    return next((r.w for r in rows if r.core_nodes == 0), None)
