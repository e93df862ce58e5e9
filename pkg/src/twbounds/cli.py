"""Command-line front end.

Exit codes: 0 success, 1 some result is partial (a budget expired),
2 bad input, 3 an invariant check failed.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

from . import oracle
from .common import TieBreak, parse_duration
from .decomposition import DecompositionError, parse_td, validate
from .graph import GraphError
from .io import ParseError, format_edge_list, read_edge_list, write_edge_list
from .lower import BASES
from .partial import CoreSweepRow, best_width, core_size_sweep, emptying_width, within_sqrt_n
from .report import (
    ALL_LOWER,
    DEFAULT_LOWER,
    DEFAULT_UPPER,
    InvariantViolation,
    RunConfig,
    fit_power_law,
    load_published_bounds,
    read_summary,
    regression_points,
    report_summary,
    run_estimation,
)
from .synthetic import GeneratorSpec, Model
from .upper import Criterion

EXIT_OK, EXIT_PARTIAL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3
ORACLE_HARD_CAP = 20

log = logging.getLogger("twbounds")


def parse_widths(text: str) -> list[int]:
    """``"0-5,8,10"`` -> ``[0, 1, 2, 3, 4, 5, 8, 10]``."""
    ws: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            if lo > hi:
                raise ValueError(f"empty width range {part!r}")
            ws.update(range(lo, hi + 1))
        else:
            ws.add(int(part))
    if not ws or min(ws) < 0:
        raise ValueError("widths must be a nonempty list of non-negative integers")
    return sorted(ws)


def _lower_spec(text: str) -> str:
    spec = text.strip().lower()
    head, _, base = spec.partition(":")
    if (spec in BASES) or (head in ("lbn", "lbn+") and base in BASES):
        return spec
    raise argparse.ArgumentTypeError(f"unknown lower bound {text!r}")


def _csv_list(kind):
    def parse(text: str):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    return parse


def _duration(text: str) -> float:
    try:
        return parse_duration(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _tie(text: str) -> TieBreak:
    try:
        return TieBreak.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _flatten(groups, default):
    if not groups:
        return list(default)
    return [x for g in groups for x in g]


# -- subcommands ---------------------------------------------------------------

def cmd_estimate(args) -> int:
    lower = _flatten(args.lb, DEFAULT_LOWER)
    if args.all_lower:
        lower = list(ALL_LOWER)
    config = RunConfig(
        inputs=args.inputs,
        upper=tuple(_flatten(args.ub, DEFAULT_UPPER)),
        lower=tuple(lower),
        tie=args.tie,
        budget=args.budget,
        out=args.out,
        jobs=args.jobs,
    )
    reports = run_estimation(config)
    print(report_summary(reports, "text"), end="")
    failed = [r for r in reports if r.error is not None]
    for r in failed:
        print(f"error: {r.name}: {r.error}", file=sys.stderr)
    if len(failed) == len(reports):
        return EXIT_INPUT
    return EXIT_PARTIAL if any(r.partial for r in reports) else EXIT_OK


def cmd_sweep(args) -> int:
    g = read_edge_list(args.input)
    rows = core_size_sweep(g, args.w, args.criterion, args.tie)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CoreSweepRow.header)
        for row in rows:
            w.writerow(row.as_csv_row())
    finally:
        if args.out:
            out.close()
    best = best_width(rows)
    empty_at = emptying_width(rows)
    note = f"smallest core at w={best.w} ({best.core_edges} edges); sqrt(n)={math.sqrt(g.n):.1f}; "
    if empty_at is None:
        note += "core never empties in the swept range"
    else:
        verdict = "low" if within_sqrt_n(g.n, empty_at) else "high"
        note += f"core empties at w={empty_at} ({verdict} width regime)"
    print(note, file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = GeneratorSpec(Model(args.model), args.n, args.seed, p=args.p, m=args.m)
    g = spec.generate()
    if args.out:
        write_edge_list(g, args.out, spec.header())
    else:
        sys.stdout.write(format_edge_list(g, spec.header()))
    print(f"generated n={g.n} m={g.m}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    g = read_edge_list(args.graph)
    td, n = parse_td(Path(args.td).read_text(encoding="utf-8"))
    if n != g.capacity:
        print(f"warning: decomposition declares {n} vertices, graph has {g.capacity}", file=sys.stderr)
    verdict = validate(g, td)
    print(f"width {td.width() if len(td) else -1}: {'valid' if verdict.ok else 'INVALID'}")
    if not verdict.ok:
        print(verdict, file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_exact(args) -> int:
    g = read_edge_list(args.input)
    cap = oracle.DEFAULT_MAX_N
    if args.override:
        cap = ORACLE_HARD_CAP
    if g.n > cap:
        hint = "" if args.override else " (pass --override to allow up to 20)"
        print(f"error: {g.n} vertices exceeds the exact-solver cap of {cap}{hint}", file=sys.stderr)
        return EXIT_INPUT
    print(f"treewidth {oracle.exact_treewidth(g, cap)}")
    print(f"degeneracy {oracle.brute_degeneracy(g, cap)}")
    if g.n >= 2:
        print(f"delta2_degeneracy {oracle.brute_delta2_degeneracy(g, cap)}")
    print(f"chordal {str(oracle.is_chordal(g)).lower()}")
    return EXIT_OK


def cmd_regress(args) -> int:
    if args.points:
        with open(args.points, newline="", encoding="utf-8") as fh:
            pts = [(float(r["n"]), float(r["t"])) for r in csv.DictReader(fh)]
    else:
        pts = regression_points(args.group)
    fit = fit_power_law(pts)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("points", "log_alpha", "log10_alpha", "beta", "r_squared", "p_value"))
    w.writerow((fit.n, f"{fit.log_alpha:.6f}", f"{fit.log10_alpha:.6f}", f"{fit.beta:.6f}",
                f"{fit.r_squared:.6f}", f"{fit.p_value:.6g}"))
    return EXIT_OK


def cmd_report(args) -> int:
    if args.summaries:
        reports = [r for path in args.summaries for r in read_summary(path)]
    else:
        reports = [row.as_report() for row in load_published_bounds()]
    print(report_summary(reports, args.format), end="")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twbounds", description="Treewidth upper and lower bounds for large graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def tie_flag(sp):
        sp.add_argument("--tie", type=_tie, default=TieBreak(), help="id (default) or random:<seed>")

    e = sub.add_parser("estimate", help="bound the treewidth of edge-list files")
    e.add_argument("inputs", nargs="+", type=Path)
    e.add_argument("--ub", action="append", type=_csv_list(Criterion),
                   help="degree|fillin|degfill; repeat or comma-separate (default degree)")
    e.add_argument("--lb", action="append", type=_csv_list(_lower_spec),
                   help="mmd|mmd+|delta2d|lbn:<base>|lbn+:<base> (default mmd,mmd+)")
    e.add_argument("--all-lower", action="store_true", help="run every lower bound")
    e.add_argument("--budget", type=_duration, default=600.0, help="per-algorithm time budget, e.g. 30s, 2h")
    e.add_argument("--out", type=Path, help="run directory for CSVs and decompositions")
    e.add_argument("--jobs", type=int, default=1, help="datasets processed in parallel")
    tie_flag(e)
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("sweep", help="core size of partial decompositions across widths")
    s.add_argument("input", type=Path)
    s.add_argument("--w", type=parse_widths, default=parse_widths("0-25"), help="widths, e.g. 0-25 or 1,2,5")
    s.add_argument("--criterion", type=Criterion, default=Criterion.DEGREE)
    s.add_argument("--out", type=Path, help="CSV file (default stdout)")
    tie_flag(s)
    s.set_defaults(func=cmd_sweep)

    gen = sub.add_parser("generate", help="write a random graph as an edge list")
    gen.add_argument("model", choices=[m.value for m in Model])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, default=0.0, help="edge probability (er) or rewiring probability (sw)")
    gen.add_argument("--m", type=int, default=1, help="attachments (pa) or neighbors per side (sw)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path)
    gen.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check a .td file against its graph")
    v.add_argument("graph", type=Path)
    v.add_argument("td", type=Path)
    v.set_defaults(func=cmd_validate)

    x = sub.add_parser("exact", help="exact treewidth and degeneracies of a tiny graph")
    x.add_argument("input", type=Path)
    x.add_argument("--override", action="store_true", help="raise the vertex cap from 14 to 20")
    x.set_defaults(func=cmd_exact)

    r = sub.add_parser("regress", help="fit width ~ alpha * n^beta")
    r.add_argument("--group", default="road", choices=("road", "social"),
                   help="bundled dataset group (default road)")
    r.add_argument("--points", type=Path, help="CSV with columns n,t instead of the bundled rows")
    r.set_defaults(func=cmd_regress)

    rep = sub.add_parser("report", help="dataset table with relative widths")
    rep.add_argument("summaries", nargs="*", type=Path, help="summary.csv files (default: bundled table)")
    rep.add_argument("--format", choices=("csv", "text"), default="text")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, ParseError, DecompositionError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
