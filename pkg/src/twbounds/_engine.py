"""Elimination workspaces used by the greedy upper-bound and peeling loops.

Two interchangeable engines speak in original vertex ids:

* ``SetEngine`` keeps one Python set per vertex; memory follows the number
  of edges, so it is the only option for very large sparse graphs.
* ``BitEngine`` relabels the live vertices ``0..r-1`` (preserving id order)
  and stores each neighborhood as an ``int`` bitmask.  Fill-in then costs one
  big-int OR per neighbor instead of a hash insert per pair, an order of
  magnitude faster once bags hold hundreds of vertices.  Memory is about
  ``r**2 / 16`` bytes.

Greedy loops start on ``SetEngine`` and switch to ``BitEngine`` when few
enough vertices remain; choices do not depend on the engine.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

DENSE_LIMIT = 20_000


def _bit_positions(x: int) -> np.ndarray:
    if not x:
        return np.empty(0, dtype=np.int64)
    raw = np.frombuffer(x.to_bytes((x.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little"))


class SetEngine:
    def __init__(self, g: Graph) -> None:
        self.adj = [set(s) for s in g.adjacency()]
        self.alive = [v in g for v in range(g.capacity)]
        self.remaining = g.n
        self.edge_count = g.m

    def is_alive(self, v: int) -> bool:
        return self.alive[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adj[v])

    def fill_in(self, v: int) -> int:
        nbrs = self.adj[v]
        d = len(nbrs)
        if d < 2:
            return 0
        inside = 0
        for u in nbrs:
            inside += len(self.adj[u] & nbrs)
        return d * (d - 1) // 2 - inside // 2

    def eliminate(self, v: int) -> tuple[list[int], int]:
        nbrs = self.adj[v]
        before = 0
        after = 0
        for u in nbrs:
            s = self.adj[u]
            s.discard(v)
            before += len(s)
            s |= nbrs
            s.discard(u)
            after += len(s)
        fill = (after - before) // 2
        self.edge_count += fill - len(nbrs)
        self.adj[v] = set()
        self.alive[v] = False
        self.remaining -= 1
        return sorted(nbrs), fill

    def vertices(self) -> list[int]:
        return [v for v, a in enumerate(self.alive) if a]

    def to_graph(self, labels=None) -> Graph:
        """Current workspace as a Graph over the original id space."""
        g = Graph(len(self.adj), labels=labels)
        adj = g.adjacency()
        for v, s in enumerate(self.adj):
            adj[v].update(s)
        g._m = self.edge_count
        for v, a in enumerate(self.alive):
            if not a:
                g._alive[v] = False
                g._n -= 1
        return g


class BitEngine:
    def __init__(self, adj: list[set[int]], alive: list[bool], edge_count: int) -> None:
        self.capacity = len(adj)
        self.ids = np.asarray([v for v, a in enumerate(alive) if a], dtype=np.int64)
        ids = self.ids.tolist()
        rank = [-1] * self.capacity
        for r, v in enumerate(ids):
            rank[v] = r
        self.rank = rank
        bits = []
        for v in ids:
            row = 0
            for u in adj[v]:
                row |= 1 << rank[u]
            bits.append(row)
        self.bits = bits
        self.deg = [len(adj[v]) for v in ids]
        self.live = [True] * len(ids)
        self.remaining = len(ids)
        self.edge_count = edge_count

    @classmethod
    def from_graph(cls, g: Graph) -> BitEngine:
        return cls(g.adjacency(), [v in g for v in range(g.capacity)], g.m)

    @classmethod
    def from_set_engine(cls, e: SetEngine) -> BitEngine:
        return cls(e.adj, e.alive, e.edge_count)

    def is_alive(self, v: int) -> bool:
        r = self.rank[v]
        return r >= 0 and self.live[r]

    def degree(self, v: int) -> int:
        return self.deg[self.rank[v]]

    def _ranks(self, r: int) -> np.ndarray:
        return _bit_positions(self.bits[r])

    def neighbors(self, v: int) -> list[int]:
        return self.ids[self._ranks(self.rank[v])].tolist()

    def fill_in(self, v: int) -> int:
        r = self.rank[v]
        mask = self.bits[r]
        d = self.deg[r]
        if d < 2:
            return 0
        bits = self.bits
        inside = 0
        for u in self._ranks(r).tolist():
            inside += (bits[u] & mask).bit_count()
        return d * (d - 1) // 2 - inside // 2

    def eliminate(self, v: int) -> tuple[list[int], int]:
        r = self.rank[v]
        mask = self.bits[r]
        nbr_ranks = self._ranks(r)
        keep = ~(1 << r)
        bits = self.bits
        deg = self.deg
        grown = 0
        for u in nbr_ranks.tolist():
            row = (bits[u] | mask) & keep & ~(1 << u)
            bits[u] = row
            c = row.bit_count()
            grown += c - deg[u] + 1
            deg[u] = c
        fill = grown // 2
        self.edge_count += fill - deg[r]
        bits[r] = 0
        deg[r] = 0
        self.live[r] = False
        self.remaining -= 1
        return self.ids[nbr_ranks].tolist(), fill

    def vertices(self) -> list[int]:
        return [int(self.ids[r]) for r, a in enumerate(self.live) if a]

    def to_graph(self, labels=None) -> Graph:
        g = Graph(self.capacity, labels=labels)
        adj = g.adjacency()
        for r, a in enumerate(self.live):
            if a:
                adj[int(self.ids[r])].update(self.ids[self._ranks(r)].tolist())
        g._m = self.edge_count
        live_ids = set(self.vertices())
        for v in range(self.capacity):
            if v not in live_ids:
                g._alive[v] = False
                g._n -= 1
        return g


def make_engine(g: Graph, dense_limit: int = DENSE_LIMIT):
    if g.n <= dense_limit:
        return BitEngine.from_graph(g)
    return SetEngine(g)


def maybe_densify(engine, dense_limit: int = DENSE_LIMIT):
    if isinstance(engine, SetEngine) and engine.remaining <= dense_limit:
        return BitEngine.from_set_engine(engine)
    return engine
