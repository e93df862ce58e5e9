from __future__ import annotations

import csv
import math

import numpy as np
import pytest

from twbounds.common import Termination
from twbounds.decomposition import parse_td, validate
from twbounds.io import read_edge_list, write_edge_list
from twbounds.report import (
    ALL_LOWER,
    ALL_UPPER,
    AlgorithmRow,
    BoundReport,
    InvariantViolation,
    RunConfig,
    estimate_graph,
    fit_power_law,
    load_published_bounds,
    read_summary,
    regression_points,
    report_summary,
    run_estimation,
)
from twbounds.synthetic import erdos_renyi

from .conftest import running_example


def textbook_ols(points):
    """Slope, intercept, R^2 from the normal equations (no shared code)."""
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(t) for _, t in points]
    k = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    beta = (k * sxy - sx * sy) / (k * sxx - sx * sx)
    alpha = (sy - beta * sx) / k
    ybar = sy / k
    ss_res = sum((y - alpha - beta * x) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - ybar) ** 2 for y in ys)
    return alpha, beta, 1 - ss_res / ss_tot, ss_res


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.txt"
    write_edge_list(running_example(), path)
    return path


def test_running_example_all_algorithms(tmp_path, example_file):
    config = RunConfig([example_file], upper=ALL_UPPER, lower=ALL_LOWER, out=tmp_path / "run")
    [report] = run_estimation(config)
    assert report.best_lower == 3 and report.best_upper == 3
    lbn_row = next(r for r in report.rows if r.algorithm == "lbn(mmd)")
    assert lbn_row.value == 3
    assert not report.partial and report.consistent
    g = read_edge_list(example_file)
    for criterion in ALL_UPPER:
        td, n = parse_td((tmp_path / "run" / f"example.{criterion.value}.td").read_text())
        assert n == 7 and validate(g, td).ok and td.width() == 3
    rows = list(csv.DictReader((tmp_path / "run" / "bounds.csv").open()))
    assert len(rows) == len(ALL_UPPER) + len(ALL_LOWER)
    assert {r["algorithm"] for r in rows} >= {"degree", "mmd", "lbn(mmd)", "lbn+(mmd)"}


def test_empty_graph_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# no edges\n")
    [report] = run_estimation(RunConfig([path], upper=ALL_UPPER, lower=ALL_LOWER))
    assert (report.n, report.best_lower, report.best_upper) == (0, 0, 0)


def test_unreadable_input_gets_an_error_row(tmp_path, example_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 x\n")
    reports = run_estimation(RunConfig([example_file, bad, tmp_path / "missing.txt"], out=tmp_path / "o"))
    assert [r.error is None for r in reports] == [True, False, False]
    summary = (tmp_path / "o" / "summary.csv").read_text()
    assert "bad" in summary and "line 1" in summary


def test_forced_timeout_marks_partial(tmp_path):
    path = tmp_path / "er.txt"
    write_edge_list(erdos_renyi(5000, 6e-4, seed=1), path)
    config = RunConfig([path], upper=ALL_UPPER, lower=("mmd", "mmd+", "lbn:mmd"), budget=1e-3,
                       out=tmp_path / "run")
    [report] = run_estimation(config)
    assert report.partial
    assert any(r.terminated_by is Termination.TIMEOUT for r in report.rows)
    assert report.consistent
    g = read_edge_list(path)
    td, _ = parse_td((tmp_path / "run" / "er.degree.td").read_text())
    assert validate(g, td).ok
    summary = list(csv.DictReader((tmp_path / "run" / "summary.csv").open()))
    assert summary[0]["partial"] == "1"
    ckpt = list(csv.reader((tmp_path / "run" / "checkpoints" / "er.degree.csv").open()))
    assert ckpt[0] == ["elapsed_ms", "eliminated", "width_so_far"]


def test_reports_are_deterministic(tmp_path, example_file):
    def run(out):
        run_estimation(RunConfig([example_file], upper=ALL_UPPER, lower=ALL_LOWER, out=out))
        return {p.name: p.read_bytes() for p in out.iterdir() if p.is_file() and p.name != "timings.csv"}

    assert run(tmp_path / "a") == run(tmp_path / "b")


def test_parallel_jobs_match_sequential(tmp_path, example_file):
    other = tmp_path / "er.txt"
    write_edge_list(erdos_renyi(300, 0.02, seed=3), other)
    seq = run_estimation(RunConfig([example_file, other], out=tmp_path / "s"))
    par = run_estimation(RunConfig([example_file, other], out=tmp_path / "p", jobs=2))
    assert [(r.best_lower, r.best_upper) for r in seq] == [(r.best_lower, r.best_upper) for r in par]
    assert (tmp_path / "s" / "bounds.csv").read_bytes() == (tmp_path / "p" / "bounds.csv").read_bytes()


def test_inconsistent_bounds_raise():
    report = BoundReport("x", 3, 2)
    report.add(AlgorithmRow("upper", "degree", 1, 0.0, Termination.COMPLETED))
    report.add(AlgorithmRow("lower", "mmd", 2, 0.0, Termination.COMPLETED))
    assert not report.consistent


def test_skipped_rows_do_not_count():
    report = BoundReport("x", 3, 2)
    report.add(AlgorithmRow("lower", "delta2d", None, 0.0, Termination.SKIPPED))
    assert report.best_lower is None and not report.partial


def test_invalid_decomposition_is_an_invariant_violation(monkeypatch):
    import twbounds.report as rep
    from twbounds.decomposition import TreeDecomposition

    real = rep.greedy_upper_bound

    def broken(*args, **kwargs):
        r = real(*args, **kwargs)
        r.decomposition = TreeDecomposition([[0]])
        return r

    monkeypatch.setattr(rep, "greedy_upper_bound", broken)
    with pytest.raises(InvariantViolation):
        estimate_graph(running_example(), "example", RunConfig())


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(budget=0)
    with pytest.raises(ValueError):
        RunConfig(upper=(), lower=())


def test_power_law_exact_curve():
    pts = [(n, 2 * n**0.5) for n in (10, 100, 1000, 10_000)]
    fit = fit_power_law(pts)
    assert fit.beta == pytest.approx(0.5, abs=1e-12)
    assert fit.alpha == pytest.approx(2.0, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.p_value < 1e-20
    assert fit.predict(400) == pytest.approx(40.0)


def test_power_law_matches_textbook_ols():
    rng = np.random.default_rng(0)
    for _ in range(20):
        k = int(rng.integers(3, 12))
        ns = rng.uniform(10, 1e6, size=k)
        ts = 3.0 * ns ** rng.uniform(0.1, 0.9) * np.exp(rng.normal(0, 0.3, size=k))
        pts = list(zip(ns.tolist(), ts.tolist()))
        fit = fit_power_law(pts)
        a, b, r2, sse = textbook_ols(pts)
        assert fit.log_alpha == pytest.approx(a, rel=1e-9)
        assert fit.beta == pytest.approx(b, rel=1e-9)
        assert fit.r_squared == pytest.approx(r2, rel=1e-9)


def test_power_law_p_value_on_three_points():
    # t = beta / se with one degree of freedom; two-sided p = 1 - 2 atan(|t|) / pi
    pts = [(10, 5), (100, 9), (1000, 30)]
    fit = fit_power_law(pts)
    a, b, _, sse = textbook_ols(pts)
    xs = [math.log(n) for n, _ in pts]
    xm = sum(xs) / 3
    se = math.sqrt(sse / 1 / sum((x - xm) ** 2 for x in xs))
    p = 1 - 2 * math.atan(abs(b / se)) / math.pi
    assert fit.p_value == pytest.approx(p, rel=1e-9)


@pytest.mark.parametrize("bad", [[(1, 1), (2, 2)], [(1, 1), (2, 0), (3, 3)], [(5, 1), (5, 2), (5, 3)]])
def test_power_law_domain_errors(bad):
    with pytest.raises(ValueError):
        fit_power_law(bad)


def test_published_table():
    rows = load_published_bounds()
    assert len(rows) == 25
    by_name = {r.name: r for r in rows}
    assert (by_name["USPowerGrid"].nodes, by_name["USPowerGrid"].upper) == (4941, 18)
    assert by_name["LiveJournal"].upper_partial and not by_name["Yeast"].upper_partial
    assert sum(r.upper_partial for r in rows) == 4
    assert len(regression_points("road")) == 8
    assert len(regression_points("social")) == 6  # the partial LiveJournal bound is left out
    with pytest.raises(ValueError):
        regression_points("web")


def test_social_regression_reproduces_published_fit():
    fit = fit_power_law(regression_points("social"))
    assert fit.beta == pytest.approx(0.5607, abs=5e-5)
    assert fit.r_squared == pytest.approx(0.6976, abs=5e-5)
    assert fit.p_value == pytest.approx(0.038, abs=5e-4)
    assert fit.log10_alpha == pytest.approx(0.6853, abs=5e-5)


def test_road_regression():
    fit = fit_power_law(regression_points("road"))
    assert 0.25 <= fit.beta <= 0.40
    assert fit.r_squared == pytest.approx(0.7867, abs=0.01)
    assert fit.p_value == pytest.approx(0.003, abs=5e-4)


def test_summary_table_relative_widths():
    reports = [r.as_report() for r in load_published_bounds()]
    text = report_summary(reports)
    rows = list(csv.DictReader(text.splitlines()))
    assert len(rows) == 25
    types = [r["type"] for r in rows]
    assert types == sorted(types)
    infra = {r["name"]: float(r["relative_upper"]) for r in rows if r["type"] == "infrastructure"}
    above = sorted(name for name, rel in infra.items() if rel >= 1e-3)
    assert above == ["Stif", "USPowerGrid"]
    for city in ("Bucharest", "HongKong", "Paris", "London"):
        assert infra[city] < 1e-3
    assert "Yeast" in report_summary(reports, "text")
    single = report_summary([reports[0]])
    assert len(single.splitlines()) == 2
    with pytest.raises(ValueError):
        report_summary([])


def test_summary_round_trip(tmp_path, example_file):
    run_estimation(RunConfig([example_file], out=tmp_path / "r"))
    back = read_summary(tmp_path / "r" / "summary.csv")
    assert back[0].best_upper == 3 and back[0].name == "example"
