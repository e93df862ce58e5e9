"""Undirected simple graphs with a mutable removal/contraction workspace.

Vertices are dense integer ids ``0..capacity-1``.  Removing a vertex leaves a
tombstone so ids stay stable while estimators peel or contract the graph;
:meth:`Graph.compact` produces a fresh dense graph when that matters.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass


class GraphError(ValueError):
    """Raised for operations on unknown vertices or missing edges."""


class Graph:
    """Undirected simple graph backed by per-vertex neighbor sets.

    Args:
        n: number of vertices to allocate.
        edges: optional iterable of ``(u, v)`` pairs; self-loops and repeated
            edges are silently dropped.
        labels: optional original label for every vertex id.
    """

    __slots__ = ("_adj", "_alive", "_n", "_m", "labels")

    def __init__(
        self,
        n: int = 0,
        edges: Iterable[tuple[int, int]] = (),
        labels: Sequence[Hashable] | None = None,
    ) -> None:
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        if labels is not None and len(labels) != n:
            raise GraphError("labels must have one entry per vertex")
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._alive = [True] * n
        self._n = n
        self._m = 0
        self.labels = list(labels) if labels is not None else None
        for u, v in edges:
            self.add_edge(u, v)

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        """Number of live vertices."""
        return self._n

    @property
    def m(self) -> int:
        """Number of edges among live vertices."""
        return self._m

    @property
    def capacity(self) -> int:
        """Size of the id space, including removed vertices."""
        return len(self._adj)

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < len(self._adj) and self._alive[v]

    def _check(self, v: int) -> None:
        if v not in self:
            raise GraphError(f"unknown vertex {v!r}")

    def vertices(self) -> Iterator[int]:
        """Live vertex ids in increasing order."""
        return (v for v, alive in enumerate(self._alive) if alive)

    def neighbors(self, v: int) -> set[int]:
        """The neighbor set of ``v``.  Do not mutate the returned set."""
        self._check(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self and v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        for u in self.vertices():
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v

    def label(self, v: int) -> Hashable:
        """Original label of ``v`` (the id itself when no labels are kept)."""
        return v if self.labels is None else self.labels[v]

    def adjacency(self) -> list[set[int]]:
        """The raw adjacency list (tombstoned entries are empty sets)."""
        return self._adj

    # -- mutation ------------------------------------------------------

    def add_vertex(self, label: Hashable | None = None) -> int:
        v = len(self._adj)
        self._adj.append(set())
        self._alive.append(True)
        self._n += 1
        if self.labels is not None:
            self.labels.append(v if label is None else label)
        return v

    def add_edge(self, u: int, v: int) -> bool:
        """Add edge ``u-v``; returns False for self-loops or existing edges."""
        self._check(u)
        self._check(v)
        if u == v or v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._m += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        if not self.has_edge(u, v):
            raise GraphError(f"no edge {u}-{v}")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._m -= 1

    def remove_vertex(self, v: int) -> None:
        """Delete ``v`` and its incident edges in O(degree)."""
        self._check(v)
        for u in self._adj[v]:
            self._adj[u].discard(v)
        self._m -= len(self._adj[v])
        self._adj[v] = set()
        self._alive[v] = False
        self._n -= 1

    def make_clique(self, vertices: Iterable[int]) -> int:
        """Connect every pair in ``vertices``; returns the number of new edges."""
        vs = list(vertices)
        added = 0
        for u in vs:
            before = len(self._adj[u])
            self._adj[u].update(vs)
            self._adj[u].discard(u)
            added += len(self._adj[u]) - before
        added //= 2
        self._m += added
        return added

    def eliminate(self, v: int) -> tuple[list[int], int]:
        """Turn the neighborhood of ``v`` into a clique, then delete ``v``.

        Returns:
            the sorted former neighbors of ``v`` and the number of fill edges.
        """
        self._check(v)
        nbrs = sorted(self._adj[v])
        self.remove_vertex(v)
        return nbrs, self.make_clique(nbrs)

    def contract_edge(self, u: int, v: int) -> None:
        """Merge ``v`` into ``u``; parallel edges collapse, loops vanish."""
        if not self.has_edge(u, v):
            raise GraphError(f"cannot contract non-edge {u}-{v}")
        moved = self._adj[v] - {u}
        self.remove_vertex(v)
        for w in moved:
            if w not in self._adj[u]:
                self._adj[u].add(w)
                self._adj[w].add(u)
                self._m += 1

    # -- derived graphs -------------------------------------------------

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g._adj = [set(s) for s in self._adj]
        g._alive = list(self._alive)
        g._n = self._n
        g._m = self._m
        g.labels = None if self.labels is None else list(self.labels)
        return g

    def compact(self) -> Graph:
        """Dense relabelled copy of the live part (labels carried over)."""
        return induced_subgraph(self, self.vertices())

    def audit(self) -> None:
        """Check symmetry, simplicity and the edge count; raise on violation."""
        total = 0
        live = 0
        for v, nbrs in enumerate(self._adj):
            if not self._alive[v]:
                if nbrs:
                    raise AssertionError(f"removed vertex {v} keeps neighbors")
                continue
            live += 1
            if v in nbrs:
                raise AssertionError(f"self-loop at {v}")
            for u in nbrs:
                if not self._alive[u]:
                    raise AssertionError(f"edge {v}-{u} to removed vertex")
                if v not in self._adj[u]:
                    raise AssertionError(f"asymmetric edge {v}-{u}")
            total += len(nbrs)
        if live != self._n:
            raise AssertionError("live vertex count out of sync")
        if total != 2 * self._m:
            raise AssertionError(f"m={self._m} but degree sum is {total}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            list(self.vertices()) == list(other.vertices())
            and list(self.edges()) == list(other.edges())
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class RelationalFact:
    """One tuple ``relation(c1, ..., ck)`` of a relational instance."""

    relation: str
    constants: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        if not self.constants:
            raise ValueError("a fact needs at least one constant")


def gaifman(facts: Iterable[RelationalFact]) -> Graph:
    """Gaifman graph: one vertex per constant, a clique per fact.

    Vertex ids follow the sorted order of the constants (by ``str`` when the
    constants are not mutually comparable), so the result does not depend on
    the order of ``facts``.
    """
    facts = list(facts)
    constants = {c for f in facts for c in f.constants}
    try:
        ordered = sorted(constants)
    except TypeError:
        ordered = sorted(constants, key=lambda c: (type(c).__name__, str(c)))
    index = {c: i for i, c in enumerate(ordered)}
    g = Graph(len(ordered), labels=ordered)
    for f in facts:
        g.make_clique({index[c] for c in f.constants})
    return g


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph induced by ``vertices``, relabelled densely in id order."""
    keep = sorted(set(vertices))
    for v in keep:
        if v not in g:
            raise GraphError(f"unknown vertex {v!r}")
    index = {v: i for i, v in enumerate(keep)}
    sub = Graph(len(keep), labels=[g.label(v) for v in keep])
    adj = sub.adjacency()
    m2 = 0
    for v in keep:
        row = adj[index[v]]
        for u in g.neighbors(v):
            j = index.get(u)
            if j is not None:
                row.add(j)
        m2 += len(row)
    sub._m = m2 // 2
    return sub


def contract_edge(g: Graph, u: int, v: int) -> None:
    """Contract edge ``u-v`` of ``g`` in place, keeping ``u``."""
    g.contract_edge(u, v)


def min_degrees(g: Graph) -> tuple[int, int | None]:
    """Smallest and second-smallest degree; the latter is None when n < 2."""
    if g.n == 0:
        raise GraphError("min degree of the empty graph is undefined")
    degs = sorted(g.degree(v) for v in g.vertices())
    return degs[0], (degs[1] if len(degs) > 1 else None)


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, in order of min id."""
    seen: set[int] = set()
    comps = []
    for s in g.vertices():
        if s in seen:
            continue
        seen.add(s)
        stack = [s]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def from_edges(edges: Iterable[tuple[int, int]], n: int | None = None) -> Graph:
    """Graph on ids ``0..n-1`` (``n`` inferred from the edges when omitted)."""
    edges = list(edges)
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)
