"""Reading and writing graphs: SNAP-style edge lists and relational CSV."""

from __future__ import annotations

import csv
import gzip
import io
from collections.abc import Iterable
from pathlib import Path
from typing import IO, TextIO

from .graph import Graph, RelationalFact, gaifman


class ParseError(ValueError):
    """Malformed input; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None) -> None:
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


def _as_text(source: str | bytes | IO) -> TextIO:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source  # type: ignore[return-value]
    return io.TextIOWrapper(source, encoding="utf-8")  # type: ignore[arg-type]


def load_edge_list(
    source: str | bytes | IO,
    comment: str = "#",
    separator: str | None = None,
    dedupe: bool = True,
) -> Graph:
    """Parse an edge list into a simple undirected graph.

    Each non-blank, non-comment line holds two integer vertex ids (extra
    columns such as weights or timestamps are ignored).  Original ids are
    densified in increasing order and kept as labels, so id order and label
    order agree.  Direction is discarded.

    Args:
        source: the text itself, bytes, or an open text/binary stream.
        comment: lines starting with this prefix are skipped.
        separator: token separator; ``None`` splits on any whitespace.
        dedupe: drop self-loops and repeated edges.  When False they raise.

    Raises:
        ParseError: on a line that does not start with two integers.
    """
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(_as_text(source), start=1):
        line = line.strip()
        if not line or (comment and line.startswith(comment)):
            continue
        parts = line.split(separator)
        if len(parts) < 2:
            raise ParseError(f"expected two vertex ids, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if not dedupe:
            key = (a, b) if a < b else (b, a)
            if a == b:
                raise ParseError(f"self-loop on {a}", lineno)
            if key in seen:
                raise ParseError(f"repeated edge {a}-{b}", lineno)
            seen.add(key)
        pairs.append((a, b))

    labels = sorted({x for p in pairs for x in p})
    index = {x: i for i, x in enumerate(labels)}
    g = Graph(len(labels), labels=labels)
    for a, b in pairs:
        g.add_edge(index[a], index[b])
    return g


def read_edge_list(path: str | Path, **options) -> Graph:
    """Load an edge-list file; ``.gz`` files are decompressed transparently."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return load_edge_list(fh, **options)


def format_edge_list(g: Graph, header: Iterable[str] = ()) -> str:
    """Edge list using original labels, one ``u v`` per line."""
    lines = [f"# {h}" for h in header]
    lines.extend(f"{g.label(u)} {g.label(v)}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: str | Path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_edge_list(g, header), encoding="utf-8")


def load_relational_csv(source: str | bytes | IO) -> list[RelationalFact]:
    """Read facts from CSV with header ``relation,c1,c2,...``.

    Rows may be ragged; empty trailing cells are ignored.
    """
    reader = csv.reader(_as_text(source))
    header = next(reader, None)
    if header is None:
        return []
    if not header or header[0].strip().lower() != "relation":
        raise ParseError("header must start with 'relation'", 1)
    facts = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        constants = tuple(c.strip() for c in row[1:] if c.strip())
        if not constants:
            raise ParseError("fact without constants", lineno)
        facts.append(RelationalFact(row[0].strip(), constants))
    return facts


def read_relational_csv(path: str | Path) -> Graph:
    """Gaifman graph of the facts stored in ``path``."""
    with open(path, encoding="utf-8", newline="") as fh:
        return gaifman(load_relational_csv(fh))


def format_pace_graph(g: Graph) -> str:
    """The graph in PACE ``.gr`` format (1-based dense ids)."""
    if g.n != g.capacity:
        g = g.compact()
    lines = [f"p tw {g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"
