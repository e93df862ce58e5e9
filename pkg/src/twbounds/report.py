"""Run orchestration, bound reports and the width-vs-size regression.

A run executes the selected upper and lower bound algorithms on each input
graph, each under its own time budget, and keeps the best of each kind.
Interrupted runs still contribute: greedy upper bounds always yield a valid
decomposition and lower bounds are anytime, so a timeout only marks the
affected row (and its report) as partial.

Outputs in the run directory:

* ``bounds.csv``: one row per (dataset, algorithm) with value and outcome.
* ``summary.csv``: one row per dataset with the best bounds.
* ``timings.csv``: elapsed seconds per row, kept apart so the files above
  are byte-identical between runs with the same configuration.
* ``<dataset>.<criterion>.td``: decompositions in PACE format.
* ``checkpoints/<dataset>.<criterion>.csv``: progress of each upper bound.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import stats

from .common import CheckpointWriter, Termination, TieBreak
from .decomposition import format_td, validate
from .graph import Graph
from .io import read_edge_list
from .lower import DELTA2D_WORK_CAP, delta2d, run_lower_bound
from .upper import Criterion, greedy_upper_bound

log = logging.getLogger(__name__)

DEFAULT_UPPER = (Criterion.DEGREE,)
DEFAULT_LOWER = ("mmd", "mmd+")
ALL_UPPER = tuple(Criterion)
ALL_LOWER = ("mmd", "mmd+", "delta2d", "lbn:mmd", "lbn+:mmd")


class InvariantViolation(RuntimeError):
    """A lower bound exceeded an upper bound, or a decomposition failed to validate."""


@dataclass
class RunConfig:
    """Everything a run depends on.

    Attributes:
        inputs: edge-list files, one dataset each.
        upper: greedy criteria to run.
        lower: lower bound names as accepted by ``run_lower_bound``.
        tie: tie-break policy shared by every greedy loop.
        budget: seconds allowed per algorithm run.
        out: run directory, or None to write nothing.
        delta2d_work_cap: skip Delta2D when ``|V| * |E|`` exceeds this.
        check_decompositions: validate every decomposition before writing it.
        jobs: worker processes across datasets.
    """

    inputs: list[Path] = field(default_factory=list)
    upper: tuple[Criterion, ...] = DEFAULT_UPPER
    lower: tuple[str, ...] = DEFAULT_LOWER
    tie: TieBreak = field(default_factory=TieBreak)
    budget: float = 600.0
    out: Path | None = None
    delta2d_work_cap: int | None = DELTA2D_WORK_CAP
    check_decompositions: bool = True
    jobs: int = 1

    def __post_init__(self) -> None:
        self.inputs = [Path(p) for p in self.inputs]
        self.upper = tuple(Criterion(c) for c in self.upper)
        self.lower = tuple(s.strip().lower() for s in self.lower)
        if self.out is not None:
            self.out = Path(self.out)
        if not self.budget or self.budget <= 0:
            raise ValueError("budget must be positive")
        if not self.upper and not self.lower:
            raise ValueError("select at least one algorithm")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass
class AlgorithmRow:
    kind: str  # "upper" or "lower"
    algorithm: str
    value: int | None
    elapsed: float
    terminated_by: Termination

    @property
    def partial(self) -> bool:
        return self.terminated_by is Termination.TIMEOUT


@dataclass
class BoundReport:
    """Best bounds for one dataset, with the per-algorithm rows behind them."""

    name: str
    n: int
    m: int
    best_lower: int | None = None
    best_lower_algorithm: str | None = None
    best_upper: int | None = None
    best_upper_algorithm: str | None = None
    rows: list[AlgorithmRow] = field(default_factory=list)
    partial: bool = False
    type: str = ""
    error: str | None = None

    @property
    def consistent(self) -> bool:
        if self.best_lower is None or self.best_upper is None:
            return True
        return self.best_lower <= self.best_upper

    def relative_lower(self) -> float | None:
        return None if self.best_lower is None or not self.n else self.best_lower / self.n

    def relative_upper(self) -> float | None:
        return None if self.best_upper is None or not self.n else self.best_upper / self.n

    def add(self, row: AlgorithmRow) -> None:
        """Record a row and update the best bound of its kind (earliest wins ties)."""
        self.rows.append(row)
        self.partial = self.partial or row.partial
        if row.value is None or row.terminated_by is Termination.SKIPPED:
            return
        if row.kind == "upper":
            if self.best_upper is None or row.value < self.best_upper:
                self.best_upper, self.best_upper_algorithm = row.value, row.algorithm
        elif self.best_lower is None or row.value > self.best_lower:
            self.best_lower, self.best_lower_algorithm = row.value, row.algorithm


def dataset_name(path: Path) -> str:
    name = path.name
    for suffix in (".gz", ".txt", ".edges", ".tsv", ".csv"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return name


def estimate_graph(g: Graph, name: str, config: RunConfig) -> BoundReport:
    """Run every configured algorithm on ``g`` and write its artifacts.

    Raises:
        InvariantViolation: when a decomposition fails to validate or the
            best lower bound exceeds the best upper bound.
    """
    report = BoundReport(name, g.n, g.m)
    out = config.out
    for criterion in config.upper:
        stem = f"{name}.{criterion.value}"
        checkpoint = None
        if out is not None:
            (out / "checkpoints").mkdir(parents=True, exist_ok=True)
            path = out / "checkpoints" / f"{stem}.csv"
            path.unlink(missing_ok=True)
            checkpoint = CheckpointWriter(path)
        try:
            result = greedy_upper_bound(
                g, criterion, config.tie, config.budget, progress=checkpoint
            )
        finally:
            if checkpoint is not None:
                checkpoint.close()
        td = result.decomposition
        if config.check_decompositions and g.n:
            verdict = validate(g, td)
            if not verdict.ok or td.width() != result.width_ub:
                raise InvariantViolation(f"{stem}: decomposition is invalid: {verdict}")
        if out is not None:
            (out / f"{stem}.td").write_text(format_td(td, g.capacity), encoding="utf-8")
        report.add(
            AlgorithmRow("upper", result.algorithm, result.width_ub, result.elapsed, result.terminated_by)
        )
    for spec in config.lower:
        if spec == "delta2d" and g.n >= 2:
            result = delta2d(g, config.budget, config.delta2d_work_cap)
        else:
            result = run_lower_bound(g, spec, config.budget)
        value = None if result.terminated_by is Termination.SKIPPED else result.value
        report.add(AlgorithmRow("lower", result.algorithm, value, result.elapsed, result.terminated_by))
    if not report.consistent:
        raise InvariantViolation(
            f"{name}: lower bound {report.best_lower} ({report.best_lower_algorithm}) exceeds "
            f"upper bound {report.best_upper} ({report.best_upper_algorithm})"
        )
    return report


def _estimate_path(path: Path, config: RunConfig) -> BoundReport:
    name = dataset_name(path)
    try:
        g = read_edge_list(path)
    except (OSError, ValueError) as exc:
        log.error("cannot read %s: %s", path, exc)
        return BoundReport(name, 0, 0, error=str(exc))
    return estimate_graph(g, name, config)


def run_estimation(config: RunConfig) -> list[BoundReport]:
    """Estimate every input of ``config``; unreadable inputs get an error report."""
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
    if config.jobs > 1 and len(config.inputs) > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            reports = list(pool.map(_estimate_path, config.inputs, [config] * len(config.inputs)))
    else:
        reports = [_estimate_path(p, config) for p in config.inputs]
    if config.out is not None:
        write_reports(reports, config.out)
    return reports


def write_reports(reports: list[BoundReport], out: Path) -> None:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "bounds.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("dataset", "n", "m", "kind", "algorithm", "value", "terminated_by", "partial"))
        for r in reports:
            if r.error is not None:
                w.writerow((r.name, r.n, r.m, "error", "", "", r.error, ""))
            for row in r.rows:
                w.writerow((r.name, r.n, r.m, row.kind, row.algorithm, _cell(row.value),
                            row.terminated_by.value, int(row.partial)))
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        fh.write(_summary_csv(reports))
    with open(out / "timings.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("dataset", "kind", "algorithm", "elapsed_s"))
        for r in reports:
            for row in r.rows:
                w.writerow((r.name, row.kind, row.algorithm, f"{row.elapsed:.6f}"))


def _cell(x) -> str:
    return "" if x is None else str(x)


def _summary_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("dataset", "n", "m", "best_lower", "best_lower_algorithm", "best_upper",
                "best_upper_algorithm", "partial", "consistent", "error"))
    for r in reports:
        w.writerow((r.name, r.n, r.m, _cell(r.best_lower), _cell(r.best_lower_algorithm),
                    _cell(r.best_upper), _cell(r.best_upper_algorithm), int(r.partial),
                    int(r.consistent), _cell(r.error)))
    return buf.getvalue()


# -- summaries --------------------------------------------------------------

SUMMARY_COLUMNS = ("type", "name", "nodes", "edges", "lower", "upper",
                   "relative_lower", "relative_upper", "partial")


def _summary_rows(reports: list[BoundReport]) -> list[tuple]:
    rows = []
    for r in sorted(reports, key=lambda r: (r.type, r.n, r.name)):
        rel_lo, rel_up = r.relative_lower(), r.relative_upper()
        rows.append((
            r.type, r.name, r.n, r.m, _cell(r.best_lower), _cell(r.best_upper),
            "" if rel_lo is None else f"{rel_lo:.3e}",
            "" if rel_up is None else f"{rel_up:.3e}",
            int(r.partial),
        ))
    return rows


def report_summary(reports: list[BoundReport], fmt: str = "csv") -> str:
    """Dataset table sorted by type then size, with widths relative to n.

    ``fmt`` is ``"csv"`` or ``"text"`` (aligned columns).
    """
    if not reports:
        raise ValueError("no reports to summarize")
    rows = _summary_rows(reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    table = [SUMMARY_COLUMNS, *[tuple(str(c) for c in row) for row in rows]]
    widths = [max(len(str(row[i])) for row in table) for i in range(len(SUMMARY_COLUMNS))]
    return "\n".join(
        "  ".join(str(c).rjust(wd) if i > 1 else str(c).ljust(wd) for i, (c, wd) in enumerate(zip(row, widths)))
        for row in table
    ) + "\n"


# -- bundled dataset table --------------------------------------------------

@dataclass(frozen=True)
class PublishedBounds:
    """One row of the bundled table of published bounds on real datasets."""

    type: str
    name: str
    nodes: int
    edges: int
    lower: int
    upper: int
    upper_partial: bool
    regression_group: str

    def as_report(self) -> BoundReport:
        return BoundReport(self.name, self.nodes, self.edges, self.lower, "published",
                           self.upper, "published", partial=self.upper_partial, type=self.type)


def load_published_bounds() -> list[PublishedBounds]:
    text = resources.files("twbounds").joinpath("data/table1.csv").read_text(encoding="utf-8")
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(PublishedBounds(
            type=rec["type"],
            name=rec["name"],
            nodes=int(rec["nodes"]),
            edges=int(rec["edges"]),
            lower=int(rec["lower"]),
            upper=int(rec["upper"]),
            upper_partial=rec["upper_partial"] == "1",
            regression_group=rec["regression_group"],
        ))
    return rows


def regression_points(group: str, rows: list[PublishedBounds] | None = None) -> list[tuple[int, int]]:
    """``(nodes, upper)`` for a regression group, leaving out partial bounds.

    ``road`` is the road, city-map and public-transport networks; ``social``
    the social networks.
    """
    rows = load_published_bounds() if rows is None else rows
    pts = [(r.nodes, r.upper) for r in rows if r.regression_group == group and not r.upper_partial]
    if not pts:
        raise ValueError(f"no rows in regression group {group!r}")
    return pts


# -- regression -------------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of ``log t = beta * log n + log_alpha`` (natural logs).

    ``p_value`` is the two-sided t-test of ``beta = 0`` with n-2 degrees of
    freedom.
    """

    log_alpha: float
    beta: float
    r_squared: float
    p_value: float
    t_stat: float
    n: int

    @property
    def alpha(self) -> float:
        return math.exp(self.log_alpha)

    @property
    def log10_alpha(self) -> float:
        return self.log_alpha / math.log(10)

    def predict(self, n: float) -> float:
        return self.alpha * n**self.beta


def fit_power_law(points) -> PowerLawFit:
    """Fit ``t ~ alpha * n**beta`` to ``(n, t)`` points.

    Raises:
        ValueError: fewer than 3 points, a nonpositive value, or all ``n``
            equal.
    """
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least 3 (n, t) points")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs positive values")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    k = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise ValueError("all n are equal; slope is undetermined")
    beta = float(np.sum((x - xm) * (y - ym)) / sxx)
    log_alpha = float(ym - beta * xm)
    resid = y - (log_alpha + beta * x)
    sse = float(resid @ resid)
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - sse / sst if sst > 0 else 1.0
    dof = k - 2
    if sse == 0.0 and beta == 0.0:
        t_stat, p = 0.0, 1.0
    elif sse == 0.0:
        t_stat, p = math.copysign(math.inf, beta), 0.0
    else:
        se = math.sqrt(sse / dof / sxx)
        t_stat = beta / se
        p = float(2 * stats.t.sf(abs(t_stat), dof))
    return PowerLawFit(log_alpha, beta, min(max(r2, 0.0), 1.0), p, t_stat, k)


def read_summary(path: str | Path) -> list[BoundReport]:
    """Load the ``summary.csv`` of an earlier run back into reports."""
    def num(x: str) -> int | None:
        return int(x) if x != "" else None

    reports = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            reports.append(BoundReport(
                rec["dataset"], int(rec["n"]), int(rec["m"]),
                num(rec["best_lower"]), rec["best_lower_algorithm"] or None,
                num(rec["best_upper"]), rec["best_upper_algorithm"] or None,
                partial=rec["partial"] == "1", error=rec["error"] or None,
            ))
    return reports
