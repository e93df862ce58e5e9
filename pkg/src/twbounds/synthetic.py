"""Random graph models for the low-to-high width transition study.

All generators draw from numpy's PCG64 (``numpy.random.default_rng``), so a
graph is reproducible from its seed on any platform.  Independent streams
for a batch of graphs come from :func:`spawn_seeds`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import Graph


class Model(str, Enum):
    ERDOS_RENYI = "er"
    PREFERENTIAL_ATTACHMENT = "pa"
    SMALL_WORLD = "sw"


@dataclass(frozen=True)
class GeneratorSpec:
    """A model, its parameters and a seed.

    ``p`` is the edge probability for ER and the rewiring probability for
    small-world graphs; ``m`` is the attachment count for PA and the
    neighbors per side for small-world graphs.
    """

    model: Model
    n: int
    seed: int
    p: float = 0.0
    m: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", Model(self.model))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.model is not Model.ERDOS_RENYI and self.m < 1:
            raise ValueError("m must be at least 1")

    def header(self) -> list[str]:
        """Comment lines recording every field, for generated edge lists."""
        fields = f"model={self.model.value} n={self.n} seed={self.seed}"
        if self.model is Model.ERDOS_RENYI:
            fields += f" p={self.p!r}"
        elif self.model is Model.PREFERENTIAL_ATTACHMENT:
            fields += f" m={self.m}"
        else:
            fields += f" m={self.m} p_rewire={self.p!r}"
        return [fields, "rng=numpy PCG64 default_rng(seed)"]

    def generate(self) -> Graph:
        if self.model is Model.ERDOS_RENYI:
            return erdos_renyi(self.n, self.p, self.seed)
        if self.model is Model.PREFERENTIAL_ATTACHMENT:
            return preferential_attachment(self.n, self.m, self.seed)
        return small_world(self.n, self.m, self.p, self.seed)


def spawn_seeds(seed: int, count: int) -> list[int]:
    """``count`` independent 64-bit seeds derived from one root seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert ``k = v(v-1)/2 + u`` with ``u < v``."""
    v = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) // 2).astype(np.int64)
    v -= (v * (v - 1) // 2 > k).astype(np.int64)
    v += ((v + 1) * v // 2 <= k).astype(np.int64)
    return k - v * (v - 1) // 2, v


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every pair is an edge independently with probability ``p``.

    Gaps between successive edges in the linear order of pairs are geometric
    with parameter ``p``, so sampling costs O(n + m) rather than O(n^2).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph(n)
    if p == 1.0:
        k = np.arange(total, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        chunks = []
        pos = -1
        size = int(total * p * 1.05) + 64
        while True:
            loc = pos + np.cumsum(rng.geometric(p, size=size), dtype=np.int64)
            inside = loc[loc < total]
            chunks.append(inside)
            if len(inside) < size:
                break
            pos = int(loc[-1])
            size = max(64, int((total - pos) * p * 1.05))
        k = np.concatenate(chunks)
    u, v = _pair_from_index(k)
    return Graph(n, zip(u.tolist(), v.tolist()))


def preferential_attachment(n: int, m: int, seed: int) -> Graph:
    """Barabasi-Albert growth from a clique on ``m + 1`` vertices.

    Each new vertex attaches to ``m`` distinct earlier vertices, each drawn
    with probability proportional to its degree; repeats are redrawn.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if n <= m:
        raise ValueError("n must exceed m")
    rng = np.random.default_rng(seed)
    g = Graph(n)
    ends: list[int] = []  # each vertex appears once per incident edge
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            g.add_edge(u, v)
            ends += (u, v)
    for v in range(m + 1, n):
        chosen: list[int] = []
        seen: set[int] = set()
        while len(chosen) < m:
            for r in rng.integers(0, len(ends), size=m - len(chosen)).tolist():
                t = ends[r]
                if t not in seen and len(chosen) < m:
                    seen.add(t)
                    chosen.append(t)
        for t in chosen:
            g.add_edge(v, t)
            ends += (v, t)
    return g


def small_world(n: int, m: int, p_rewire: float, seed: int) -> Graph:
    """Watts-Strogatz: ring lattice with ``m`` neighbors per side, then rewiring.

    Lattice edges are visited by offset, then by vertex; each is rewired
    with probability ``p_rewire`` by moving its far endpoint to a uniform
    vertex that is neither the near endpoint nor already its neighbor.
    Rewiring keeps the edge count at exactly ``n * m``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if n <= 2 * m:
        raise ValueError("n must exceed 2m")
    if not 0.0 <= p_rewire <= 1.0:
        raise ValueError("p_rewire must lie in [0, 1]")
    g = Graph(n, ((u, (u + j) % n) for j in range(1, m + 1) for u in range(n)))
    if p_rewire == 0.0:
        return g
    rng = np.random.default_rng(seed)
    for j in range(1, m + 1):
        coins = rng.random(n) < p_rewire
        for u in np.flatnonzero(coins).tolist():
            v = (u + j) % n
            if not g.has_edge(u, v) or g.degree(u) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == u or g.has_edge(u, w):
                w = int(rng.integers(n))
            g.remove_edge(u, v)
            g.add_edge(u, w)
    return g
