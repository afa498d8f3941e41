import csv
import io
import subprocess
import sys

import numpy as np
import pytest

import steadybounds.cli as cli
from steadybounds.cli import main, parse_range
from steadybounds.model import builtin_model, model_to_json
from steadybounds.oracle import OracleError
from steadybounds.relaxation import read_sdpa
from steadybounds.solver import solve


def rows_of(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_identity(capsys):
    code, out, _ = run(["bound", "--model", "ising", "--k", "2", "--obs", "I"], capsys)
    assert code == 0
    (row,) = rows_of(out)
    assert float(row["lower"]) == pytest.approx(1, abs=1e-5)
    assert float(row["upper"]) == pytest.approx(1, abs=1e-5)
    assert row["status"] == "optimal"


def test_bound_header_and_rows(capsys):
    code, out, _ = run(["bound", "--model", "ising_1d", "--k", "3"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "# steadybounds bound v1"
    assert out.splitlines()[1] == "observable,lower,upper,width,status,residuals,gap"
    rows = rows_of(out)
    assert [r["observable"] for r in rows] == ["X", "Y", "Z"]
    z = rows[2]
    assert float(z["lower"]) <= -0.8108 <= float(z["upper"])


def test_bound_output_is_byte_stable(tmp_path):
    paths = [tmp_path / f"r{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["bound", "--model", "dicke_1d", "--k", "3", "--obs", "X,Z", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_timing_column(capsys):
    _, out, _ = run(["bound", "--model", "ising", "--k", "2", "--obs", "Z", "--timing"], capsys)
    assert "wall_time" in out.splitlines()[1]


def test_twelve_significant_digits():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(float("nan")) == "nan"


def test_open_chain_rows(capsys):
    code, out, _ = run(["bound", "--model", "ising", "--k", "3", "--open", "4", "--obs", "Z", "--site", "0,3"], capsys)
    assert code == 0
    assert [r["observable"] for r in rows_of(out)] == ["Z@0", "Z@3"]


def test_json_model_with_parameter_override(tmp_path, capsys):
    path = tmp_path / "dicke.json"
    path.write_text(model_to_json(builtin_model("dicke_1d")))
    code, out, _ = run(["bound", "--model", str(path), "--k", "3", "--obs", "Z", "--param", "g=0"], capsys)
    assert code == 0
    assert float(rows_of(out)[0]["lower"]) == pytest.approx(-1, abs=1e-5)


def test_malformed_json_writes_nothing(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x",\n  "lattice": ')
    out = tmp_path / "out.csv"
    code, _, err = run(["bound", "--model", str(bad), "--k", "3", "--out", str(out)], capsys)
    assert code == 1
    assert "line" in err
    assert not out.exists()


@pytest.mark.parametrize("args", [
    ["bound", "--model", "ising"],  # no --k
    ["bound", "--model", "nosuchmodel", "--k", "3"],
    ["bound", "--model", "ising", "--k", "3", "--cluster", "1x1"],
    ["bound", "--model", "dicke_2d", "--k", "3"],
    ["bound", "--model", "ising", "--k", "2", "--obs", "XXX"],
    ["bound", "--model", "ising", "--k", "3", "--param", "g=abc"],
    ["bound", "--model", "ising", "--k", "3", "--bogus"],
    ["export-sdp", "--model", "ising", "--k", "3", "--obs", "Z"],  # no --out
])
def test_usage_errors_exit_1(args, capsys):
    try:
        code = main(args)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_numerical_failure_exit_2(monkeypatch, capsys):
    def broken(*a, **k):
        raise np.linalg.LinAlgError("singular Schur complement")

    monkeypatch.setattr(cli, "bound_observable", broken)
    code, out, _ = run(["bound", "--model", "ising", "--k", "2", "--obs", "Z"], capsys)
    assert code == 2
    assert rows_of(out)[0]["status"] == "numerical_failure"


# sweep ------------------------------------------------------------------------

def test_parse_range():
    assert parse_range("0:1:0.25") == [0, 0.25, 0.5, 0.75, 1.0]
    assert parse_range("1:0:0.5") == []
    with pytest.raises(cli.UsageError):
        parse_range("0:1:0")


@pytest.mark.parametrize("grid", [["--range", "1:0:0.5"], ["--values", ","], ["--range", "0:1:-1"]])
def test_empty_or_invalid_grid_exit_1(grid, capsys):
    code, _, _ = run(["sweep", "--model", "dicke_1d", "--k", "3", "--param", "g"] + grid, capsys)
    assert code == 1


def test_sweep_rows_and_widths(tmp_path, capsys):
    widths = tmp_path / "w.csv"
    code, out, _ = run(["sweep", "--model", "dicke_2d", "--cluster", "1x1", "--param", "g", "--values", "0.5,1.5",
                        "--obs", "X", "--widths", str(widths)], capsys)
    assert code == 0
    rows = rows_of(out)
    assert [float(r["value"]) for r in rows] == [0.5, 1.5]
    for r in rows:
        assert float(r["lower"]) <= 0 <= float(r["upper"])
    w = rows_of(widths.read_text())
    assert list(w[0]) == ["g", "width_X"]


def test_sweep_records_failures_in_row(capsys):
    code, out, err = run(["sweep", "--model", "dicke_1d", "--k", "2", "--param", "g", "--values", "1",
                          "--obs", "Z,XXX"], capsys)
    rows = rows_of(out)
    assert rows[0]["status"] == "optimal"
    assert rows[1]["status"] == "error" and "fit" in rows[1]["message"]
    assert code == 1 and "warning" in err


def test_sweep_widths_peak_near_resonance(capsys):
    code, out, _ = run(["sweep", "--model", "dicke_1d", "--k", "5", "--param", "g", "--range", "0.25:2:0.25",
                        "--obs", "Z"], capsys)
    assert code == 0
    rows = rows_of(out)
    g = [float(r["value"]) for r in rows]
    w = [float(r["width"]) for r in rows]
    assert 0.75 <= g[int(np.argmax(w))] <= 1.25


def test_sweep_parallel_matches_serial(tmp_path):
    outs = []
    for jobs in ("1", "2"):
        p = tmp_path / f"s{jobs}.csv"
        assert main(["sweep", "--model", "dicke_1d", "--k", "3", "--param", "g", "--values", "0.5,1",
                     "--obs", "Z", "--jobs", jobs, "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


# verify -------------------------------------------------------------------------

def test_verify_ising_with_small_n_skipped(capsys):
    code, out, err = run(["verify", "--model", "ising", "--k", "4", "--N", "3,5,6", "--obs", "X,Z"], capsys)
    assert code == 0
    assert "skipping size 3" in err
    results = [r["result"] for r in rows_of(out)]
    assert results == ["skipped", "skipped", "contained", "contained", "contained", "contained"]


def test_verify_degenerate_dicke(capsys):
    code, out, _ = run(["verify", "--model", "dicke_1d", "--param", "g=0", "--k", "4", "--N", "6", "--obs", "Z"],
                       capsys)
    assert code == 0
    (row,) = rows_of(out)
    assert float(row["exact_lower"]) == pytest.approx(-1, abs=1e-8)
    assert float(row["exact_upper"]) == pytest.approx(-2 / 3, abs=1e-8)
    assert row["kernel_dim"] == "2"


def test_verify_violation_exit_3(monkeypatch, capsys):
    monkeypatch.setattr(cli, "extremal_expectation", lambda *a, **k: (5.0, 5.0))
    code, out, _ = run(["verify", "--model", "ising", "--k", "3", "--N", "4", "--obs", "Z"], capsys)
    assert code == 3
    assert rows_of(out)[0]["result"] == "violation"


def test_verify_oracle_failure_exit_4(monkeypatch, capsys):
    def fail(*a, **k):
        raise OracleError("no kernel found")

    monkeypatch.setattr(cli, "exact_steady_states", fail)
    code, out, _ = run(["verify", "--model", "ising", "--k", "3", "--N", "4", "--obs", "Z"], capsys)
    assert code == 4
    assert rows_of(out)[0]["result"] == "inconclusive"


# export and fixtures ------------------------------------------------------------------

def test_export_sdp_round_trip(tmp_path):
    path = tmp_path / "p.dat-s"
    assert main(["export-sdp", "--model", "ising", "--k", "3", "--obs", "Z", "--sense", "min", "--out",
                 str(path)]) == 0
    assert solve(read_sdpa(path)).value == pytest.approx(-0.841877672138, abs=1e-6)


def test_fixtures_single_model(tmp_path):
    path = tmp_path / "fx.csv"
    assert main(["fixtures", "--model", "ising", "--N", "4", "--obs", "X", "--out", str(path)]) == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 1 and rows[0]["observable"] == "X"
    assert float(rows[0]["lower"]) == pytest.approx(0.439781253442, abs=1e-9)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "steadybounds", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "steadybounds" in out.stdout
