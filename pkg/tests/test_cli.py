from __future__ import annotations

import csv

import pytest

from twbounds.cli import main, parse_widths
from twbounds.decomposition import TreeDecomposition, format_td
from twbounds.io import write_edge_list

from .conftest import cycle, running_example


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.txt"
    write_edge_list(running_example(), path)
    return path


def test_parse_widths():
    assert parse_widths("0-3,8, 5") == [0, 1, 2, 3, 5, 8]
    for bad in ("", "3-1", "-1", "x"):
        with pytest.raises(ValueError):
            parse_widths(bad)


def test_estimate(tmp_path, example_file, capsys):
    out = tmp_path / "run"
    code = main(["estimate", str(example_file), "--ub", "degree,fillin", "--ub", "degfill",
                 "--all-lower", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "example" in text
    rows = list(csv.DictReader((out / "summary.csv").open()))
    assert (rows[0]["best_lower"], rows[0]["best_upper"]) == ("3", "3")
    assert (out / "example.fillin.td").exists()


def test_estimate_partial_exit_code(tmp_path, capsys):
    big = tmp_path / "er.txt"
    assert main(["generate", "er", "--n", "5000", "--p", "6e-4", "--seed", "1", "--out", str(big)]) == 0
    assert main(["estimate", str(big), "--budget", "0.001s"]) == 1


def test_estimate_input_errors(tmp_path, example_file, capsys):
    assert main(["estimate", str(tmp_path / "missing.txt")]) == 2
    assert "missing" in capsys.readouterr().err
    # one good file is enough to succeed
    assert main(["estimate", str(example_file), str(tmp_path / "missing.txt")]) == 0
    with pytest.raises(SystemExit):
        main(["estimate", str(example_file), "--lb", "lbn:nope"])
    with pytest.raises(SystemExit):
        main(["estimate", str(example_file), "--budget", "soon"])


def test_sweep(example_file, capsys):
    assert main(["sweep", str(example_file), "--w", "0-3"]) == 0
    captured = capsys.readouterr()
    rows = list(csv.reader(captured.out.splitlines()))
    assert rows[0][0] == "w"
    assert [int(r[2]) for r in rows[1:]] == [10, 9, 6, 0]
    assert "core empties at w=3" in captured.err and "high" in captured.err  # 3 > sqrt(7)


def test_generate_to_stdout(capsys):
    assert main(["generate", "sw", "--n", "20", "--m", "2", "--p", "0.1", "--seed", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("# model=sw n=20 seed=4")
    assert len([line for line in out if not line.startswith("#")]) == 40


def test_validate(tmp_path, example_file, capsys):
    td_path = tmp_path / "example.degree.td"
    assert main(["estimate", str(example_file), "--out", str(tmp_path)]) == 0
    assert main(["validate", str(example_file), str(td_path)]) == 0
    assert "width 3: valid" in capsys.readouterr().out
    bad = tmp_path / "bad.td"
    bad.write_text(format_td(TreeDecomposition([[0, 1]]), 7))
    assert main(["validate", str(example_file), str(bad)]) == 3


def test_exact_and_override(tmp_path, example_file, capsys):
    assert main(["exact", str(example_file)]) == 0
    out = capsys.readouterr().out
    assert "treewidth 3" in out and "degeneracy 2" in out and "delta2_degeneracy 3" in out
    ring = tmp_path / "ring.txt"
    write_edge_list(cycle(16), ring)
    assert main(["exact", str(ring)]) == 2
    assert "--override" in capsys.readouterr().err
    assert main(["exact", str(ring), "--override"]) == 0
    assert "treewidth 2" in capsys.readouterr().out
    bigger = tmp_path / "ring21.txt"
    write_edge_list(cycle(21), bigger)
    assert main(["exact", str(bigger), "--override"]) == 2


def test_regress(tmp_path, capsys):
    assert main(["regress", "--group", "social"]) == 0
    row = list(csv.DictReader(capsys.readouterr().out.splitlines()))[0]
    assert row["points"] == "6" and row["beta"].startswith("0.560")
    pts = tmp_path / "pts.csv"
    pts.write_text("n,t\n10,20\n100,63.2455532\n1000,200\n")
    assert main(["regress", "--points", str(pts)]) == 0
    row = list(csv.DictReader(capsys.readouterr().out.splitlines()))[0]
    assert float(row["beta"]) == pytest.approx(0.5, abs=1e-6)
    pts.write_text("n,t\n10,20\n")
    assert main(["regress", "--points", str(pts)]) == 2


def test_report(tmp_path, example_file, capsys):
    assert main(["report", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 26
    assert main(["estimate", str(example_file), "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    assert main(["report", str(tmp_path / "summary.csv")]) == 0
    assert "example" in capsys.readouterr().out


def test_invariant_violation_exit_code(monkeypatch, example_file, capsys):
    import twbounds.report as rep

    real = rep.greedy_upper_bound

    def broken(*args, **kwargs):
        r = real(*args, **kwargs)
        r.decomposition = TreeDecomposition([[0]])
        return r

    monkeypatch.setattr(rep, "greedy_upper_bound", broken)
    assert main(["estimate", str(example_file)]) == 3
    assert "invariant violation" in capsys.readouterr().err
