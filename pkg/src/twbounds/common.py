"""Shared run plumbing: termination causes, tie-break policies, budgets."""

from __future__ import annotations

import csv
import re
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

# Budgets and checkpoints are polled once per this many eliminations/removals.
CHECK_INTERVAL = 1024


class Termination(str, Enum):
    COMPLETED = "completed"
    EARLY_STOP = "early_stop"
    TIMEOUT = "timeout"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class TieBreak:
    """How greedy loops order vertices with equal score.

    ``TieBreak()`` prefers the smaller vertex id.  ``TieBreak(seed=s)`` draws
    one random permutation of the ids from ``s`` and prefers the vertex that
    comes first in it, so a run is reproducible from its seed.
    """

    seed: int | None = None

    @classmethod
    def by_id(cls) -> TieBreak:
        return cls()

    @classmethod
    def random(cls, seed: int) -> TieBreak:
        return cls(int(seed))

    @classmethod
    def parse(cls, text: str) -> TieBreak:
        """Accepts ``id`` or ``random:<seed>``."""
        text = text.strip().lower()
        if text == "id":
            return cls()
        m = re.fullmatch(r"random:(\d+)", text)
        if not m:
            raise ValueError(f"tie policy must be 'id' or 'random:<seed>', got {text!r}")
        return cls(int(m.group(1)))

    @property
    def is_random(self) -> bool:
        return self.seed is not None

    def keys(self, capacity: int) -> list[int]:
        if self.seed is None:
            return list(range(capacity))
        return np.random.default_rng(self.seed).permutation(capacity).tolist()

    def __str__(self) -> str:
        return "id" if self.seed is None else f"random:{self.seed}"


class Stopwatch:
    """Elapsed-time tracker with an optional budget in seconds."""

    def __init__(self, budget: float | None = None) -> None:
        if budget is not None and budget <= 0:
            raise ValueError("budget must be positive")
        self.budget = budget
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def expired(self) -> bool:
        return self.budget is not None and self.elapsed >= self.budget


_UNITS = {"ms": 1e-3, "s": 1.0, "m": 60.0, "min": 60.0, "h": 3600.0, "d": 86400.0, "w": 604800.0}


def parse_duration(text: str | float | int) -> float:
    """``'250ms'``, ``'30s'``, ``'5m'``, ``'2h'``, ``'14d'``, ``'2w'`` or bare seconds."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+)\s*([a-z]*)\s*", text.lower())
        if not m or m.group(2) not in _UNITS | {"": 1.0}:
            raise ValueError(f"cannot parse duration {text!r}")
        value = float(m.group(1)) * _UNITS.get(m.group(2), 1.0)
    if value <= 0:
        raise ValueError("duration must be positive")
    return value


class CheckpointWriter:
    """Append-only ``elapsed_ms,eliminated,width_so_far`` CSV log.

    Instances are callables so they can be passed as a ``progress`` hook.
    Each row is flushed, so an interrupted run leaves its best bound on disk.
    """

    header = ("elapsed_ms", "eliminated", "width_so_far")

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        self._fh = open(self.path, "a", newline="", encoding="utf-8")
        self._writer = csv.writer(self._fh)
        if fresh:
            self._writer.writerow(self.header)
            self._fh.flush()

    def __call__(self, elapsed_ms: float, eliminated: int, width: int) -> None:
        self._writer.writerow((f"{elapsed_ms:.3f}", eliminated, width))
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> CheckpointWriter:
        return self

    def __exit__(self, *exc) -> None:
        self.close()
