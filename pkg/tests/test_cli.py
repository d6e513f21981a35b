import csv
import io
import json
from pathlib import Path

import pytest

from prizebalance import BudgetDistribution
from prizebalance.analysis import sweep_e
from prizebalance.cli import main, parse_grid, sweep_rows

DATA = Path(__file__).resolve().parents[1] / "src" / "prizebalance" / "data"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def five_csv():
    return str(DATA / "five_clubs.csv")


def test_index(five_csv):
    assert run("index", "--input", five_csv) == (0, "HHI 2444.4, High\n")
    assert run("index", "--input", str(DATA / "four_equal.csv")) == (0, "HHI 2500.0, High\n")


def test_index_json_and_cr(five_csv):
    code, out = run("index", "--input", five_csv, "--cr", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["band"] == "High" and d["cr"]["value"] == pytest.approx(0.6)
    assert d["hhi_points"] == pytest.approx(d["hhi_raw"] * 10000, rel=1e-15)


def test_json_input(tmp_path):
    p = tmp_path / "league.json"
    p.write_text(json.dumps([{"club": "A", "budget": 2}, {"club": "B", "budget": 2},
                             {"club": "C", "budget": 2}, {"club": "D", "budget": 2}]))
    assert run("index", "-i", str(p)) == (0, "HHI 2500.0, High\n")


def test_thresholds(five_csv):
    code, out = run("thresholds", "--input", five_csv, "--endowment", "50")
    assert code == 0
    assert "k* = 4" in out
    row4 = [line for line in out.splitlines() if line.strip().startswith("4 ")][0].split()
    assert row4[1:4] == ["ThresholdAt", "60", "10"]


def test_thresholds_three_json():
    code, out = run("thresholds", "-i", str(DATA / "three_clubs.json"), "-E", "7", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["k_star"] == 3
    assert [r["classification"] for r in d["rows"][:2]] == ["NeverImproves", "NeverImproves"]


def test_apply(five_csv):
    code, out = run("apply", "-i", str(DATA / "three_clubs.json"), "--weights", "0.75,0.25", "-E", "4",
                    "--format", "csv")
    assert code == 0
    assert list(csv.reader(io.StringIO(out)))[1:] == [["A", "6.0"], ["B", "3.0"], ["C", "1.0"]]
    code, out = run("apply", "-i", five_csv, "--k", "4", "-E", "60", "--format", "json")
    assert json.loads(out)["effect"] == "neutral"


def test_apply_amounts_file(tmp_path, five_csv):
    p = tmp_path / "amounts.txt"
    p.write_text("0,0,0,0,4\n")
    code, out = run("apply", "-i", five_csv, "--amounts", str(p), "-E", "4", "--format", "json")
    assert code == 0 and json.loads(out)["effect"] == "improves"


def test_sweep_stdout(five_csv):
    code, out = run("sweep", "-i", five_csv, "--k", "4", "--grid", "0,10,20,60")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["E", "hhi_points", "band", "delta"]
    assert [float(r["delta"]) for r in rows] == pytest.approx([0, -0.0044444, -0.0036281, 0], abs=1e-6)


def test_sweep_file_round_trip(tmp_path, five_csv):
    out_path = tmp_path / "sweep.csv"
    code, _ = run("sweep", "-i", five_csv, "--k", "2", "--grid", "0:100:250", "--out", str(out_path))
    assert code == 0
    with open(out_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["E", "hhi_points", "band", "delta"]
    X = BudgetDistribution.from_budgets([5, 4, 3, 2, 1], labels=list("ABCDE"))
    recomputed = sweep_rows(sweep_e(X, 2, [float(r[0]) for r in rows[1:]]))
    assert rows[1:] == recomputed
    for r in rows[1:]:
        assert round(float(r[1]), 1) == round(float(r[1]) / 10000 * 10000, 1)


def test_sweep_points_flag(five_csv):
    _, raw = run("sweep", "-i", five_csv, "--k", "4", "--grid", "0,10")
    _, pts = run("sweep", "-i", five_csv, "--k", "4", "--grid", "0,10", "--points")
    d_raw = float(list(csv.DictReader(io.StringIO(raw)))[1]["delta"])
    d_pts = float(list(csv.DictReader(io.StringIO(pts)))[1]["delta"])
    assert d_pts == pytest.approx(d_raw * 10000, rel=1e-15)


def test_parse_grid():
    assert parse_grid("0:10:5") == [0, 2, 4, 6, 8, 10]
    assert parse_grid("0,10,20") == [0, 10, 20]


@pytest.mark.parametrize("content,fragment", [
    ("club,budget\nA,5\nB,-1\n", ":3:"),
    ("club,budget\nA,5\nB,abc\n", ":3:"),
    ("team,money\nA,5\nB,3\n", ":1:"),
    ("club,budget\nA,5\n", "at least 2"),
    ("club,budget\nA,5\nB\n", ":3:"),
])
def test_input_errors_exit_2(tmp_path, capsys, content, fragment):
    p = tmp_path / "bad.csv"
    p.write_text(content)
    code, _ = run("index", "-i", str(p))
    assert code == 2
    assert fragment in capsys.readouterr().err


def test_bad_json_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('[{"club": "A", "budget": 1}, {"club": "B"}]')
    assert run("index", "-i", str(p))[0] == 2
    assert "entry 1" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["index", "-i", "/nonexistent/file.csv"],
    ["apply", "-i", "{five}", "--k", "9", "-E", "1"],
    ["apply", "-i", "{five}", "-E", "1"],
    ["apply", "-i", "{five}", "--k", "1", "-E", "-3"],
    ["sweep", "-i", "{five}", "--k", "2", "--grid", "5:1:10"],
    ["sweep", "-i", "{five}", "--k", "2", "--grid", "0,0"],
    ["sweep", "-i", "{five}", "--k", "2", "--grid", "0:10:5", "--out", "/nonexistent/dir/x.csv"],
    ["thresholds", "-i", "{five}", "-E", "-1"],
    ["verify", "--n-min", "1"],
])
def test_validation_errors_exit_2(five_csv, argv):
    argv = [a.replace("{five}", five_csv) for a in argv]
    assert run(*argv)[0] == 2


def test_argparse_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        run("index")
    assert exc.value.code == 2


def test_verify_small():
    code, out = run("verify", "--instances", "100", "--seed", "3", "--peak-steps", "1000")
    assert code == 0
    assert out.strip().endswith("6 properties, 100 instances, 0 failures")
    assert run("verify", "--instances", "100", "--seed", "3", "--peak-steps", "1000")[1] == out


def test_verify_minimum_league():
    code, out = run("verify", "--instances", "50", "--n-min", "2", "--n-max", "2", "--peak-steps", "1000")
    assert code == 0 and "0 failures" in out


def test_verify_failure_exit_1(monkeypatch):
    from prizebalance import analysis
    monkeypatch.setattr(analysis, "k_star", lambda X, E: 1)
    code, out = run("verify", "--instances", "30", "--peak-steps", "500")
    assert code == 1
    assert "first failure: instance #" in out


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "prizebalance", "index", "-i", str(DATA / "five_clubs.csv")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "HHI 2444.4, High\n"
