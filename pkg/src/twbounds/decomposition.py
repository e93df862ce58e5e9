"""Tree decompositions: model, validation and construction from orderings."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph


class DecompositionError(ValueError):
    """Structurally broken input (as opposed to an invalid decomposition)."""


@dataclass(frozen=True)
class EliminationOrdering:
    """A vertex order, possibly cut short by an early stop.

    When ``truncated`` is set, ``residual`` holds the vertices that were never
    eliminated; they end up together in a single root bag.
    """

    order: tuple[int, ...]
    truncated: bool = False
    residual: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        object.__setattr__(self, "residual", tuple(sorted(int(v) for v in self.residual)))
        if len(set(self.order)) != len(self.order):
            raise DecompositionError("ordering repeats a vertex")
        if set(self.order) & set(self.residual):
            raise DecompositionError("residual vertices must not be eliminated")
        if self.residual and not self.truncated:
            raise DecompositionError("only truncated orderings carry a residue")

    @property
    def residual_clique_size(self) -> int:
        return len(self.residual)

    def check(self, g: Graph) -> None:
        """Raise unless this ordering (plus residue) covers exactly ``V(g)``."""
        covered = set(self.order) | set(self.residual)
        if covered != set(g.vertices()):
            raise DecompositionError("ordering does not match the graph's vertices")


def _as_bag(b) -> np.ndarray:
    if isinstance(b, np.ndarray) and b.dtype == np.int64:
        return b
    return np.asarray(sorted({int(x) for x in b}), dtype=np.int64)


@dataclass
class TreeDecomposition:
    """Bags (sorted vertex arrays) and the tree edges between bag indices."""

    bags: list[np.ndarray]
    tree_edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.bags = [_as_bag(b) for b in self.bags]

    def __len__(self) -> int:
        return len(self.bags)

    def bag_sets(self) -> list[frozenset[int]]:
        return [frozenset(b.tolist()) for b in self.bags]

    def width(self) -> int:
        return width(self)


def width(td: TreeDecomposition) -> int:
    """Largest bag size minus one."""
    if not td.bags:
        raise DecompositionError("width of an empty decomposition is undefined")
    return max(len(b) for b in td.bags) - 1


@dataclass
class ValidationReport:
    vertex_coverage: bool
    edge_coverage: bool
    connectivity: bool
    tree_shape: bool
    missing_vertices: list[int] = field(default_factory=list)
    uncovered_edges: list[tuple[int, int]] = field(default_factory=list)
    disconnected_vertices: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.vertex_coverage and self.edge_coverage and self.connectivity and self.tree_shape

    def __bool__(self) -> bool:
        return self.ok


class _DSU:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def validate(g: Graph, td: TreeDecomposition, limit: int = 20) -> ValidationReport:
    """Check the three tree-decomposition properties against ``g``.

    Besides vertex coverage, edge coverage and the connected-subtree
    condition, the bag graph itself must be a forest with nonempty bags;
    several trees are only accepted when ``g`` is disconnected (one tree per
    group of components is enough).  At most ``limit`` offenders of each kind
    are listed.

    Raises:
        DecompositionError: a bag names a vertex outside ``g`` or a tree edge
            names an unknown bag.
    """
    nb = len(td.bags)
    holders: dict[int, list[int]] = {}
    nonempty = True
    for i, bag in enumerate(td.bags):
        if len(bag) == 0:
            nonempty = False
        for x in bag.tolist():
            if x not in g:
                raise DecompositionError(f"bag {i} holds unknown vertex {x}")
            holders.setdefault(x, []).append(i)

    dsu = _DSU(nb)
    acyclic = True
    for a, b in td.tree_edges:
        if not (0 <= a < nb and 0 <= b < nb):
            raise DecompositionError(f"tree edge ({a}, {b}) names an unknown bag")
        if not dsu.union(a, b):
            acyclic = False
    tree_shape = acyclic and nonempty

    missing = [v for v in g.vertices() if v not in holders]

    holder_sets = {v: set(h) for v, h in holders.items()}
    uncovered = []
    for u, v in g.edges():
        hu, hv = holder_sets.get(u), holder_sets.get(v)
        if not hu or not hv or hu.isdisjoint(hv):
            uncovered.append((u, v))
            if len(uncovered) >= limit:
                break

    # In a forest, the bags holding v induce a connected subtree iff the tree
    # edges inside that set number exactly |set| - 1.
    inner = dict.fromkeys(holders, 0)
    if acyclic:
        for a, b in td.tree_edges:
            common = np.intersect1d(td.bags[a], td.bags[b], assume_unique=True)
            for x in common.tolist():
                inner[x] += 1
        disconnected = [v for v, h in holders.items() if inner[v] != len(h) - 1]
    else:
        disconnected = []
    disconnected.sort()

    return ValidationReport(
        vertex_coverage=not missing,
        edge_coverage=not uncovered,
        connectivity=acyclic and not disconnected,
        tree_shape=tree_shape,
        missing_vertices=missing[:limit],
        uncovered_edges=uncovered,
        disconnected_vertices=disconnected[:limit],
    )


def assemble(
    order: Sequence[int],
    neighborhoods: Sequence[Sequence[int]],
    residual: Sequence[int] = (),
) -> TreeDecomposition:
    """Link elimination bags into a tree.

    ``neighborhoods[i]`` lists the neighbors of ``order[i]`` at the moment it
    was eliminated.  Bag ``i`` is ``{order[i]} | neighborhoods[i]`` and hangs
    below the bag of whichever of those neighbors is eliminated first; all
    residual vertices share one last bag, which acts as the root.
    """
    position = {v: i for i, v in enumerate(order)}
    root = len(order)
    for v in residual:
        position[v] = root
    bags = []
    edges = []
    for i, (v, nbrs) in enumerate(zip(order, neighborhoods)):
        nbrs = np.asarray(nbrs, dtype=np.int64)
        bag = np.empty(len(nbrs) + 1, dtype=np.int64)
        bag[:-1] = nbrs
        bag[-1] = v
        bag.sort()
        bags.append(bag)
        if len(nbrs):
            edges.append((i, min(position[x] for x in nbrs.tolist())))
    if len(residual):
        bags.append(np.asarray(sorted(residual), dtype=np.int64))
    return TreeDecomposition(bags, edges)


def decomposition_from_ordering(g: Graph, ordering: EliminationOrdering | Iterable[int]) -> TreeDecomposition:
    """Tree decomposition obtained by eliminating vertices in ``ordering``.

    A complete ordering may be passed as a plain sequence.
    """
    if not isinstance(ordering, EliminationOrdering):
        ordering = EliminationOrdering(tuple(ordering))
    ordering.check(g)
    work = g.copy()
    nbhds = [work.eliminate(v)[0] for v in ordering.order]
    return assemble(ordering.order, nbhds, ordering.residual)


def fill_edges(g: Graph, ordering: EliminationOrdering | Iterable[int]) -> set[tuple[int, int]]:
    """Edges added by the elimination procedure, as ``(min, max)`` pairs."""
    if not isinstance(ordering, EliminationOrdering):
        ordering = EliminationOrdering(tuple(ordering))
    ordering.check(g)
    work = g.copy()
    added = set()
    for v in ordering.order:
        nbrs, _ = work.eliminate(v)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if not g.has_edge(a, b):
                    added.add((a, b))
    return added


def triangulate(g: Graph, ordering: EliminationOrdering | Iterable[int]) -> Graph:
    """``g`` plus every fill edge of a complete elimination ordering."""
    if not isinstance(ordering, EliminationOrdering):
        ordering = EliminationOrdering(tuple(ordering))
    if ordering.truncated:
        raise DecompositionError("triangulation needs a complete ordering")
    h = g.copy()
    for a, b in fill_edges(g, ordering):
        h.add_edge(a, b)
    return h


def max_clique_of_triangulation(g: Graph, ordering: EliminationOrdering | Iterable[int]) -> int:
    """Largest bag created while eliminating along a complete ordering."""
    if not isinstance(ordering, EliminationOrdering):
        ordering = EliminationOrdering(tuple(ordering))
    if ordering.truncated:
        raise DecompositionError("triangulation needs a complete ordering")
    ordering.check(g)
    work = g.copy()
    best = 0
    for v in ordering.order:
        best = max(best, work.degree(v) + 1)
        work.eliminate(v)
    return best


# -- PACE .td serialization ----------------------------------------------

def format_td(td: TreeDecomposition, n: int) -> str:
    """Serialize in the PACE ``.td`` layout (1-based bag and vertex ids)."""
    w1 = max((len(b) for b in td.bags), default=0)
    lines = [f"s td {len(td.bags)} {w1} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i), *(str(x + 1) for x in bag.tolist())]))
    lines.extend(f"{a + 1} {b + 1}" for a, b in td.tree_edges)
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """Inverse of :func:`format_td`; returns the decomposition and ``n``."""
    header = None
    bags: dict[int, list[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise DecompositionError(f"line {lineno}: bad solution line")
            header = tuple(int(x) for x in parts[2:])
        elif parts[0] == "b":
            bags[int(parts[1])] = [int(x) - 1 for x in parts[2:]]
        else:
            if len(parts) != 2:
                raise DecompositionError(f"line {lineno}: bad tree edge")
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise DecompositionError("missing 's td' line")
    nbags, _, n = header
    if sorted(bags) != list(range(1, nbags + 1)):
        raise DecompositionError("bag ids must be 1..#bags")
    return TreeDecomposition([bags[i] for i in range(1, nbags + 1)], edges), n
