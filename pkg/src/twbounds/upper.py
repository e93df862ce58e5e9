"""Greedy elimination-ordering heuristics for treewidth upper bounds.

Every run yields a tree decomposition whose width is the reported bound.
The loop stops early once the vertices left could fit in the largest bag
seen so far, since eliminating them cannot produce anything wider.

Cost per elimination is O(d^2) for fill-in (d = current degree); FillIn
scores additionally need rescoring of the whole 2-neighborhood, which is
why Degree is the only heuristic that scales to millions of vertices.
"""

from __future__ import annotations

import heapq
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

from ._engine import DENSE_LIMIT, make_engine, maybe_densify
from .common import CHECK_INTERVAL, Stopwatch, Termination, TieBreak
from .decomposition import EliminationOrdering, TreeDecomposition, assemble
from .graph import Graph, GraphError

Progress = Callable[[float, int, int], None]


class Criterion(str, Enum):
    DEGREE = "degree"
    FILL_IN = "fillin"
    DEGREE_FILL_IN = "degfill"


@dataclass
class UpperBoundResult:
    width_ub: int
    ordering: EliminationOrdering
    decomposition: TreeDecomposition | None
    fill_edges_added: int
    elapsed: float
    terminated_by: Termination
    criterion: Criterion
    tie: TieBreak = field(default_factory=TieBreak)

    @property
    def algorithm(self) -> str:
        return self.criterion.value


def _scorer(criterion: Criterion):
    if criterion is Criterion.DEGREE:
        return lambda e, v: e.degree(v)
    if criterion is Criterion.FILL_IN:
        return lambda e, v: e.fill_in(v)
    return lambda e, v: e.degree(v) + e.fill_in(v)


def score(g: Graph, v: int, criterion: Criterion | str) -> int:
    """Greedy score of ``v`` in workspace ``g`` (lower is eliminated first)."""
    criterion = Criterion(criterion)
    if v not in g:
        raise GraphError(f"vertex {v} is not in the workspace")
    nbrs = g.neighbors(v)
    d = len(nbrs)
    if criterion is Criterion.DEGREE:
        return d
    inside = sum(len(nbrs & g.neighbors(u)) for u in nbrs) // 2
    fill = d * (d - 1) // 2 - inside
    return fill if criterion is Criterion.FILL_IN else d + fill


def greedy_upper_bound(
    g: Graph,
    criterion: Criterion | str = Criterion.DEGREE,
    tie: TieBreak | None = None,
    budget: float | None = None,
    *,
    progress: Progress | None = None,
    keep_bags: bool = True,
    dense_limit: int = DENSE_LIMIT,
) -> UpperBoundResult:
    """Eliminate min-score vertices one by one and report the widest bag.

    Args:
        g: input graph; it is not modified.
        criterion: which score to minimize.
        tie: tie-break policy among equal scores; smallest id by default.
        budget: wall-clock budget in seconds.  On expiry every remaining
            vertex goes into one root bag, so the result is still a valid
            (if loose) upper bound.
        progress: called as ``progress(elapsed_ms, eliminated, width_so_far)``
            every ``CHECK_INTERVAL`` eliminations and once at the end.
        keep_bags: set False to skip storing bags (``decomposition`` is then
            None), e.g. for parameter sweeps on dense graphs.
        dense_limit: switch to the bitset engine once at most this many
            vertices remain.  Results do not depend on it.
    """
    criterion = Criterion(criterion)
    tie = tie or TieBreak()
    clock = Stopwatch(budget)
    engine = make_engine(g, dense_limit)
    keys = tie.keys(g.capacity)
    scorer = _scorer(criterion)

    current: dict[int, int] = {}
    heap = []
    for v in g.vertices():
        s = scorer(engine, v)
        current[v] = s
        heap.append((s, keys[v], v))
    heapq.heapify(heap)

    order: list[int] = []
    nbhds: list[list[int]] = []
    max_bag = 0
    fill_total = 0
    terminated = Termination.COMPLETED

    while engine.remaining:
        s, _, v = heapq.heappop(heap)
        if not engine.is_alive(v) or current[v] != s:
            continue
        nbrs, fill = engine.eliminate(v)
        fill_total += fill
        order.append(v)
        if keep_bags:
            nbhds.append(nbrs)
        if len(nbrs) + 1 > max_bag:
            max_bag = len(nbrs) + 1

        if engine.remaining and engine.remaining <= max_bag:
            terminated = Termination.EARLY_STOP
            break
        if len(order) % CHECK_INTERVAL == 0:
            if progress is not None:
                progress(clock.elapsed * 1e3, len(order), max_bag - 1)
            if clock.expired():
                terminated = Termination.TIMEOUT
                break

        if criterion is Criterion.DEGREE:
            touched = nbrs
        else:
            touched = set(nbrs)
            for u in nbrs:
                touched.update(engine.neighbors(u))
        for u in touched:
            ns = scorer(engine, u)
            if ns != current[u]:
                current[u] = ns
                heapq.heappush(heap, (ns, keys[u], u))
        engine = maybe_densify(engine, dense_limit)

    residual = engine.vertices() if engine.remaining else []
    width_ub = max(max_bag, len(residual)) - 1 if g.n else 0
    ordering = EliminationOrdering(tuple(order), bool(residual), tuple(residual))
    td = assemble(order, nbhds, residual) if keep_bags else None
    if progress is not None:
        progress(clock.elapsed * 1e3, len(order), width_ub)
    return UpperBoundResult(
        width_ub=width_ub,
        ordering=ordering,
        decomposition=td,
        fill_edges_added=fill_total,
        elapsed=clock.elapsed,
        terminated_by=terminated,
        criterion=criterion,
        tie=tie,
    )


def degree_upper_bound(g: Graph, **kwargs) -> UpperBoundResult:
    return greedy_upper_bound(g, Criterion.DEGREE, **kwargs)


def fill_in_upper_bound(g: Graph, **kwargs) -> UpperBoundResult:
    return greedy_upper_bound(g, Criterion.FILL_IN, **kwargs)


def degree_fill_in_upper_bound(g: Graph, **kwargs) -> UpperBoundResult:
    return greedy_upper_bound(g, Criterion.DEGREE_FILL_IN, **kwargs)
