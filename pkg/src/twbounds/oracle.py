"""Exact reference computations for small graphs.

These are the ground truth that the heuristics are tested against, and are
also exposed on the command line for sanity checks on tiny inputs.  All of
them work on bitmasks over the dense vertex ids and refuse graphs with more
than ``max_n`` live vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph

DEFAULT_MAX_N = 14


class OracleLimitError(ValueError):
    """The instance is too large for an exponential-time routine."""


@dataclass(frozen=True)
class OracleLimit:
    max_n: int = DEFAULT_MAX_N

    def check(self, g: Graph) -> None:
        if g.n > self.max_n:
            raise OracleLimitError(f"graph has {g.n} vertices; oracle limit is {self.max_n}")


def _masks(g: Graph) -> list[int]:
    """Neighborhood bitmasks over the compacted graph."""
    h = g if g.n == g.capacity else g.compact()
    return [sum(1 << u for u in h.neighbors(v)) for v in range(h.n)]


def _popcount(x: int) -> int:
    return x.bit_count()


def exact_treewidth(g: Graph, max_n: int = DEFAULT_MAX_N) -> int:
    """Treewidth by dynamic programming over vertex subsets.

    ``best[S]`` is the smallest possible max-degree met while eliminating
    exactly the vertices of ``S`` first.  Eliminating ``v`` after ``S`` gives
    it one neighbor for each outside vertex reachable from ``v`` through
    ``S``, hence
    ``best[S | v] = min over v of max(best[S], |reach(S, v)|)``.
    Runs in O(2^n n^2) time.  The empty graph is reported as width 0.
    """
    OracleLimit(max_n).check(g)
    adj = _masks(g)
    n = len(adj)
    if n == 0:
        return 0
    full = (1 << n) - 1
    inf = n + 1
    best = [inf] * (1 << n)
    best[0] = -1
    for s in range(1 << n):
        bs = best[s]
        if bs >= inf:
            continue
        rest = full & ~s
        x = rest
        while x:
            low = x & -x
            x ^= low
            v = low.bit_length() - 1
            q = _reach(adj, s, v)
            val = bs if bs > q else q
            t = s | low
            if val < best[t]:
                best[t] = val
    return best[full]


def _reach(adj: list[int], s: int, v: int) -> int:
    """Number of vertices outside ``s | {v}`` reachable from ``v`` through ``s``."""
    seen = 1 << v
    frontier = seen
    boundary = 0
    while frontier:
        grow = 0
        x = frontier
        while x:
            low = x & -x
            x ^= low
            grow |= adj[low.bit_length() - 1]
        grow &= ~seen
        boundary |= grow & ~s
        frontier = grow & s
        seen |= grow
    return _popcount(boundary)


def brute_degeneracy(g: Graph, max_n: int = DEFAULT_MAX_N) -> int:
    """Max over nonempty induced subgraphs of the minimum degree."""
    OracleLimit(max_n).check(g)
    adj = _masks(g)
    n = len(adj)
    best = 0
    for s in range(1, 1 << n):
        members = [v for v in range(n) if s >> v & 1]
        best = max(best, min(_popcount(adj[v] & s) for v in members))
    return best


def brute_delta2_degeneracy(g: Graph, max_n: int = DEFAULT_MAX_N) -> int:
    """Max over induced subgraphs with >= 2 vertices of the second-smallest degree."""
    OracleLimit(max_n).check(g)
    adj = _masks(g)
    n = len(adj)
    if n < 2:
        raise ValueError("needs at least two vertices")
    best = 0
    for s in range(1, 1 << n):
        members = [v for v in range(n) if s >> v & 1]
        if len(members) < 2:
            continue
        degs = sorted(_popcount(adj[v] & s) for v in members)
        best = max(best, degs[1])
    return best


def is_chordal(g: Graph) -> bool:
    """Chordality via maximum cardinality search; works at any size.

    MCS numbers vertices so that, if the graph is chordal, reversing the
    visit order gives a perfect elimination ordering.  The ordering is then
    checked directly: each vertex's earlier-visited neighbors must be
    adjacent to the latest-visited one among them.
    """
    verts = list(g.vertices())
    weight = dict.fromkeys(verts, 0)
    visited: dict[int, int] = {}
    buckets: dict[int, set[int]] = {0: set(verts)}
    top = 0
    for i in range(len(verts)):
        while top > 0 and not buckets.get(top):
            top -= 1
        v = min(buckets[top])
        buckets[top].discard(v)
        visited[v] = i
        for u in g.neighbors(v):
            if u not in visited:
                buckets[weight[u]].discard(u)
                weight[u] += 1
                buckets.setdefault(weight[u], set()).add(u)
                top = max(top, weight[u])
    for v in verts:
        earlier = [u for u in g.neighbors(v) if visited[u] < visited[v]]
        if len(earlier) < 2:
            continue
        p = max(earlier, key=visited.__getitem__)
        pn = g.neighbors(p)
        if any(u != p and u not in pn for u in earlier):
            return False
    return True


def is_chordal_brute(g: Graph, max_n: int = DEFAULT_MAX_N) -> bool:
    """Chordality straight from the definition: no chordless cycle of length >= 4.

    A chordless cycle is an induced subgraph that is connected with every
    degree equal to 2, so every vertex subset of size >= 4 is tested.
    """
    OracleLimit(max_n).check(g)
    adj = _masks(g)
    n = len(adj)
    for size in range(4, n + 1):
        for combo in combinations(range(n), size):
            s = sum(1 << v for v in combo)
            if all(_popcount(adj[v] & s) == 2 for v in combo) and _connected(adj, s):
                return False
    return True


def _connected(adj: list[int], s: int) -> bool:
    start = s & -s
    seen = start
    frontier = start
    while frontier:
        grow = 0
        x = frontier
        while x:
            low = x & -x
            x ^= low
            grow |= adj[low.bit_length() - 1]
        frontier = grow & s & ~seen
        seen |= frontier
    return seen == s
