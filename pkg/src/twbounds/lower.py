"""Treewidth lower bounds: degeneracy, contraction degeneracy, improved graphs.

All bounds here are anytime: when a budget expires the best value found so
far is returned, and it is still a valid lower bound.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter, deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from enum import Enum

from .common import CHECK_INTERVAL, Stopwatch, Termination
from .graph import Graph, GraphError

log = logging.getLogger(__name__)

# Delta2D is skipped when |V| * |E| exceeds this.
DELTA2D_WORK_CAP = 10**11


class Measure(str, Enum):
    """Degeneracy measures that bound treewidth from below.

    ``mmd`` computes DEGENERACY exactly and ``delta2d`` computes
    DELTA2_DEGENERACY exactly. ``mmd_plus`` is a greedy under-estimate of
    CONTRACTION_DEGENERACY. DELTA2_CONTRACTION_DEGENERACY is named for
    completeness only: its exact value is NP-hard and no heuristic is offered.
    """

    DEGENERACY = "delta_d"
    DELTA2_DEGENERACY = "delta2_d"
    CONTRACTION_DEGENERACY = "delta_c"
    DELTA2_CONTRACTION_DEGENERACY = "delta2_c"


@dataclass
class LowerBoundResult:
    value: int
    algorithm: str
    elapsed: float
    terminated_by: Termination = Termination.COMPLETED
    history: list[int] = field(default_factory=list)


class _Timeout(Exception):
    pass


def _ticker(clock: Stopwatch):
    count = 0

    def tick() -> None:
        nonlocal count
        count += 1
        if count % CHECK_INTERVAL == 0 and clock.expired():
            raise _Timeout

    return tick


# -- degeneracy ---------------------------------------------------------

def degeneracy_order(g: Graph) -> list[tuple[int, int]]:
    """Repeatedly remove a minimum-degree vertex (smallest id on ties).

    Returns the ``(vertex, degree at removal)`` sequence.
    """
    return list(_peel(g, None))


def _peel(g: Graph, tick):
    deg = {v: g.degree(v) for v in g.vertices()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    gone = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in gone or deg[v] != d:
            continue
        gone.add(v)
        yield v, d
        for u in g.neighbors(v):
            if u not in gone:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
        if tick is not None:
            tick()


def mmd(g: Graph, budget: float | None = None) -> LowerBoundResult:
    """Maximum Minimum Degree: the degeneracy of ``g``, computed exactly."""
    clock = Stopwatch(budget)
    best = 0
    try:
        for _, d in _peel(g, _ticker(clock)):
            if d > best:
                best = d
    except _Timeout:
        return LowerBoundResult(best, "mmd", clock.elapsed, Termination.TIMEOUT)
    return LowerBoundResult(best, "mmd", clock.elapsed)


def _core_survives(adj, vertices: Iterable[int], keep: int, t: int) -> bool:
    """Does some subgraph containing ``keep`` give all other vertices degree >= t?"""
    deg = {v: 0 for v in vertices}
    for v in deg:
        deg[v] = sum(1 for u in adj[v] if u in deg)
    queue = [v for v, d in deg.items() if d < t and v != keep]
    dead = set(queue)
    while queue:
        v = queue.pop()
        for u in adj[v]:
            if u in deg and u not in dead:
                deg[u] -= 1
                if deg[u] < t and u != keep:
                    dead.add(u)
                    queue.append(u)
    return len(deg) - len(dead) >= 2


def delta2d(g: Graph, budget: float | None = None, work_cap: int | None = DELTA2D_WORK_CAP) -> LowerBoundResult:
    """δ₂-degeneracy: the max over subgraphs of the second-smallest degree.

    For a fixed vertex ``v`` that is never removed, peeling the other
    vertices by minimum degree gives the best subgraph containing ``v``; the
    answer is the max over all ``v``.  Since that value is always the
    degeneracy or one more, each ``v`` only needs one threshold test: does
    the ``(degeneracy + 1)``-core survive when ``v`` is protected?  Such a
    subgraph minus ``v`` lies in the degeneracy-core, so only vertices in or
    next to that core are tried.

    Raises:
        GraphError: fewer than two vertices.
    """
    if g.n < 2:
        raise GraphError("delta2d needs at least two vertices")
    clock = Stopwatch(budget)
    if work_cap is not None and g.n * g.m > work_cap:
        log.warning("delta2d skipped: |V|*|E| = %d exceeds work cap %d", g.n * g.m, work_cap)
        return LowerBoundResult(0, "delta2d", clock.elapsed, Termination.SKIPPED)

    base = mmd(g).value
    t = base + 1
    adj = g.adjacency()
    core = _k_core(g, base)
    candidates = set(core)
    for v in core:
        candidates.update(adj[v])
    for i, v in enumerate(sorted(candidates)):
        if i % 64 == 0 and clock.expired():
            return LowerBoundResult(base, "delta2d", clock.elapsed, Termination.TIMEOUT)
        if _core_survives(adj, core | {v}, v, t):
            return LowerBoundResult(t, "delta2d", clock.elapsed)
    return LowerBoundResult(base, "delta2d", clock.elapsed)


def _k_core(g: Graph, k: int) -> set[int]:
    survivors = {v: g.degree(v) for v in g.vertices()}
    queue = [v for v, d in survivors.items() if d < k]
    dead = set(queue)
    while queue:
        v = queue.pop()
        for u in g.neighbors(v):
            if u not in dead:
                survivors[u] -= 1
                if survivors[u] < k:
                    dead.add(u)
                    queue.append(u)
    return set(survivors) - dead


# -- contraction degeneracy ----------------------------------------------

def least_c_neighbor(g: Graph, v: int) -> int:
    """Neighbor of ``v`` sharing the fewest neighbors with it (smallest id on ties)."""
    nbrs = g.neighbors(v)
    return min(nbrs, key=lambda u: (len(nbrs & g.neighbors(u)), u))


def contract_min_degree(g: Graph) -> int:
    """Contract a min-degree vertex into its least-c neighbor (or delete it if
    isolated).  Returns the degree of the removed vertex."""
    v = min(g.vertices(), key=lambda x: (g.degree(x), x))
    d = g.degree(v)
    if d == 0:
        g.remove_vertex(v)
    else:
        g.contract_edge(least_c_neighbor(g, v), v)
    return d


def mmd_plus(g: Graph, budget: float | None = None) -> LowerBoundResult:
    """MMD+ with the least-c rule: contract instead of delete.

    Each step takes a minimum-degree vertex ``v`` (smallest id on ties) and
    merges it into the neighbor with the fewest common neighbors.  The max
    of the degrees seen is a lower bound on the contraction degeneracy and
    hence on treewidth.
    """
    clock = Stopwatch(budget)
    h = g.copy()
    heap = [(h.degree(v), v) for v in h.vertices()]
    heapq.heapify(heap)
    best = 0
    steps = 0
    while h.n > 1:
        d, v = heapq.heappop(heap)
        if v not in h or h.degree(v) != d:
            continue
        best = max(best, d)
        if d == 0:
            h.remove_vertex(v)
            continue
        u = least_c_neighbor(h, v)
        touched = h.neighbors(v) | {u}
        h.contract_edge(u, v)
        for x in touched:
            heapq.heappush(heap, (h.degree(x), x))
        steps += 1
        if steps % CHECK_INTERVAL == 0 and clock.expired():
            return LowerBoundResult(best, "mmd+", clock.elapsed, Termination.TIMEOUT)
    return LowerBoundResult(best, "mmd+", clock.elapsed)


# -- improved graphs ------------------------------------------------------

def _close(h: Graph, k: int, seeds: Iterable[tuple[int, int]], tick=None) -> int:
    """Add edges until no non-adjacent pair has k+1 common neighbors.

    Only pairs in ``seeds`` (and pairs whose count later grows) are checked,
    so ``seeds`` must include every pair that may already qualify.
    """
    need = k + 1
    queue = deque(seeds)
    added = 0
    while queue:
        a, b = queue.popleft()
        if tick is not None:
            tick()
        na, nb = h.neighbors(a), h.neighbors(b)
        if b in na or len(na) < need or len(nb) < need or len(na & nb) < need:
            continue
        h.add_edge(a, b)
        added += 1
        # b is now a common neighbor of a and each neighbor of b, and v.v.
        queue.extend((a, y) for y in nb if y != a and y not in na)
        queue.extend((b, y) for y in na if y != b and y not in nb)
    return added


def _distance_two_pairs(h: Graph, k: int, tick=None):
    need = k + 1
    big = {v for v in h.vertices() if h.degree(v) >= need}
    for v in sorted(big):
        if tick is not None:
            tick()
        counts = Counter()
        nv = h.neighbors(v)
        for x in nv:
            for w in h.neighbors(x):
                if w > v and w in big:
                    counts[w] += 1
        for w in sorted(counts):
            if counts[w] >= need and w not in nv:
                yield v, w


def improve_graph(g: Graph, k: int) -> Graph:
    """The (k+1)-neighbor improved graph of ``g``.

    Repeatedly joins non-adjacent vertices with at least ``k + 1`` common
    neighbors.  If ``g`` has treewidth at most ``k`` so does the result.
    The closure is unique, so scan order does not affect it.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    h = g.copy()
    _close(h, k, list(_distance_two_pairs(h, k)))
    return h


def _improve_in_place(h: Graph, k: int, tick=None) -> None:
    _close(h, k, list(_distance_two_pairs(h, k, tick)), tick)


# -- LBN / LBN+ -------------------------------------------------------------

LowerBound = Callable[..., LowerBoundResult]


def _base_fn(base) -> tuple[str, LowerBound]:
    if callable(base):
        return getattr(base, "__name__", "base").replace("_plus", "+"), base
    name = str(base).lower()
    fn = BASES.get(name)
    if fn is None:
        raise ValueError(f"unknown base lower bound {base!r}; choose from {sorted(BASES)}")
    return name, fn


def _first_base(fn: LowerBound, g: Graph, budget: float | None) -> LowerBoundResult:
    if g.n < 2:
        return LowerBoundResult(0, "", 0.0)
    return fn(g, budget=budget)


def _base_value(fn: LowerBound, h: Graph, clock: Stopwatch) -> int:
    """Base bound of ``h`` within what is left of the budget."""
    if h.n < 2:
        return 0
    left = None if clock.budget is None else clock.budget - clock.elapsed
    if left is not None and left <= 0:
        raise _Timeout
    r = fn(h, budget=left)
    if r.terminated_by is Termination.TIMEOUT:
        raise _Timeout
    return r.value


def lbn(g: Graph, base="mmd", budget: float | None = None) -> LowerBoundResult:
    """LBN: raise a lower bound through neighbor-improved graphs.

    With current bound ``low``, the (low+1)-neighbor improved graph of ``g``
    is built; if ``base`` proves its treewidth exceeds ``low``, then so does
    the treewidth of ``g`` and ``low`` grows by one.  Each round starts from
    the original graph.
    """
    name, fn = _base_fn(base)
    clock = Stopwatch(budget)
    first = _first_base(fn, g, budget)
    low = first.value
    history = [low]
    if first.terminated_by is Termination.TIMEOUT:
        return LowerBoundResult(low, f"lbn({name})", clock.elapsed, Termination.TIMEOUT, history)
    tick = _ticker(clock)
    try:
        while low < g.n - 1:
            h = g.copy()
            _improve_in_place(h, low, tick)
            if _base_value(fn, h, clock) <= low:
                break
            low += 1
            history.append(low)
    except _Timeout:
        return LowerBoundResult(low, f"lbn({name})", clock.elapsed, Termination.TIMEOUT, history)
    return LowerBoundResult(low, f"lbn({name})", clock.elapsed, Termination.COMPLETED, history)


def lbn_plus(g: Graph, base="mmd", budget: float | None = None) -> LowerBoundResult:
    """LBN+: like LBN, but alternate improvement with contractions.

    While testing ``low``, the improved graph is repeatedly shrunk by
    contracting a min-degree vertex into its least-c neighbor and improved
    again; both steps keep "treewidth <= low" true, so any time ``base``
    exceeds ``low`` the bound of ``g`` grows.  A graph with at most
    ``low + 1`` vertices cannot exceed ``low``, which ends the test.
    """
    name, fn = _base_fn(base)
    clock = Stopwatch(budget)
    first = _first_base(fn, g, budget)
    low = first.value
    history = [low]
    if first.terminated_by is Termination.TIMEOUT:
        return LowerBoundResult(low, f"lbn+({name})", clock.elapsed, Termination.TIMEOUT, history)
    tick = _ticker(clock)
    try:
        while low < g.n - 1:
            h = g.copy()
            _improve_in_place(h, low, tick)
            raised = False
            while h.n > low + 1:
                if _base_value(fn, h, clock) > low:
                    raised = True
                    break
                v = min(h.vertices(), key=lambda x: (h.degree(x), x))
                if h.degree(v) == 0:
                    h.remove_vertex(v)
                    continue
                u = least_c_neighbor(h, v)
                fresh = h.neighbors(v) - h.neighbors(u) - {u}
                h.contract_edge(u, v)
                nu = h.neighbors(u)
                seeds = [(u, y) for x in nu for y in h.neighbors(x) if y != u and y not in nu]
                seeds.extend((a, b) for a in fresh for b in nu if b != a)
                _close(h, low, seeds, tick)
                tick()
            if not raised:
                break
            low += 1
            history.append(low)
    except _Timeout:
        return LowerBoundResult(low, f"lbn+({name})", clock.elapsed, Termination.TIMEOUT, history)
    return LowerBoundResult(low, f"lbn+({name})", clock.elapsed, Termination.COMPLETED, history)


BASES: dict[str, LowerBound] = {"mmd": mmd, "mmd+": mmd_plus, "delta2d": delta2d}


def run_lower_bound(g: Graph, spec: str, budget: float | None = None) -> LowerBoundResult:
    """Run a lower bound named like the CLI flag: ``mmd``, ``lbn:mmd+``, ..."""
    spec = spec.strip().lower()
    if spec.startswith("lbn+:"):
        return lbn_plus(g, spec[5:], budget)
    if spec.startswith("lbn:"):
        return lbn(g, spec[4:], budget)
    if spec in BASES:
        if g.n < 2:
            return LowerBoundResult(0, spec, 0.0)
        return BASES[spec](g, budget=budget)
    raise ValueError(f"unknown lower bound {spec!r}")
