import io
import json

import pytest

from contracted_maxima.cli import run
from contracted_maxima.report import ExperimentReport, emit_report, format_value


def call(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_csv(capsys):
    code, out, _ = call(["constants", "--spec", "one", "--n", "1000", "--mode", "exact"], capsys)
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "n,mode,a,b"
    n, mode, a, b = row.split(",")
    assert (n, mode) == ("1000", "exact")
    assert float(b) == pytest.approx(3.090232, abs=1e-6)
    assert float(a) == pytest.approx(0.323601, abs=1e-6)
    assert len(b.replace(".", "")) == 17


def test_constants_closed_mode(capsys):
    code, out, _ = call(["constants", "--spec", "ptail:0.5:2", "--n", "10000", "--mode", "closed"], capsys)
    assert code == 0
    assert float(out.splitlines()[1].split(",")[3]) == pytest.approx(2.380759321967588, rel=1e-15)


@pytest.mark.slow
def test_weak_limit_trend(capsys):
    argv = ["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "256,4096,65536",
            "--reps", "2000", "--mode", "exact", "--seed", "7"]
    code, out, _ = call(argv, capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,replicates,mode,ks,runtime_ms"
    ks = [float(l.split(",")[3]) for l in lines[1:]]
    assert len(ks) == 3
    assert all(b <= a + 0.01 for a, b in zip(ks, ks[1:]))
    assert all(l.endswith(",") for l in lines[1:])
    assert call(argv, capsys)[1] == out


def test_berman_flag(capsys):
    code, out, _ = call(["berman-check", "--model", "log:0.9:1.5", "--delta", "1", "--n-grid", "10,100,1000"], capsys)
    assert code == 0
    assert all(l.endswith(",violated") for l in out.strip().splitlines()[1:])


@pytest.mark.parametrize("argv", [
    ["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "", "--seed", "1"],
    ["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "256"],
    ["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "256,128", "--seed", "1"],
    ["asclt", "--model", "iid", "--spec", "one", "--n", "1000"],
    ["constants", "--spec", "beta:2", "--n", "100"],
    ["constants", "--spec", "one", "--n", "2"],
    ["constants", "--spec", "one", "--n", "100", "--bogus"],
    ["psd-check", "--model", "fbm:0.3", "--n-grid", "8"],
    ["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "256", "--seed", "-4"],
    ["tail-check", "--spec", "one", "--u-grid", "3,2"],
    [],
])
def test_config_errors_exit_1(argv, capsys):
    code, out, err = call(argv, capsys)
    assert code == 1
    assert out == ""
    assert err.startswith("error:") and len(err.strip().splitlines()) == 1


def test_error_names_the_flag(capsys):
    _, _, err = call(["constants", "--spec", "beta:2", "--n", "100"], capsys)
    assert "--spec" in err
    _, _, err = call(["weak-limit", "--model", "iid", "--spec", "one", "--n-grid", "256"], capsys)
    assert "--seed" in err


def test_numerical_failure_exits_2(capsys):
    code, out, err = call(["constants", "--spec", "ptail:0.1:3", "--n", "10"], capsys)
    assert code == 2
    assert err.startswith("numerical failure")
    code, _, _ = call(["weak-limit", "--model", "pow:-0.9:0.3", "--spec", "one", "--n-grid", "64",
                       "--reps", "10", "--seed", "1"], capsys)
    assert code == 2


def test_output_file_and_json_round_trip(tmp_path, capsys):
    path = tmp_path / "r.json"
    argv = ["asclt", "--model", "ar1:0.5", "--spec", "beta:2:3", "--n", "5000", "--seed", "3",
            "--format", "json", "--output", str(path)]
    assert call(argv, capsys)[0] == 0
    text = path.read_text()
    rep = ExperimentReport.from_json(text)
    assert rep.to_json() == text
    assert rep.config["seed"] == 3 and "version" in rep.config
    assert len(rep.records) == 3


def test_verify(tmp_path, capsys):
    path = tmp_path / "w.json"
    argv = ["weak-limit", "--model", "ar1:0.5", "--spec", "ptail:0.5:1", "--n-grid", "64,128",
            "--reps", "500", "--seed", "9", "--timing", "--format", "json", "--output", str(path)]
    assert call(argv, capsys)[0] == 0
    code, out, _ = call(["--verify", str(path)], capsys)
    assert code == 0 and out.startswith("verified")
    d = json.loads(path.read_text())
    d["records"][0]["ks"] += 1e-3
    path.write_text(json.dumps(d))
    assert call(["--verify", str(path)], capsys)[0] == 2
    assert call(["--verify", str(tmp_path / "missing.json")], capsys)[0] == 1


def test_unwritable_output(tmp_path, capsys):
    code, _, err = call(["psd-check", "--model", "ar1:0.5", "--n-grid", "8",
                         "--output", str(tmp_path / "no" / "such" / "dir.csv")], capsys)
    assert code == 1
    assert "dir.csv" in err


@pytest.mark.parametrize("argv, columns", [
    (["comparison-sum", "--model", "ar1:0.5", "--spec", "one", "--n-grid", "64,128"], "n,value"),
    (["tail-check", "--spec", "ptail:1:1", "--u-grid", "10,20"], "u,ratio"),
    (["sandwich-check", "--spec", "beta:2:3", "--u-grid", "5,10"], "u,log_lower,log_value,log_upper,log_gaussian"),
    (["psd-check", "--model", "log:0.9:1.5", "--n-grid", "16,256"], "n,embedding_size,min_eigenvalue,clipped_mass"),
])
def test_diagnostic_commands(argv, columns, capsys):
    code, out, _ = call(argv, capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == columns and len(lines) == 3


def test_float_format_round_trips():
    for v in (0.1, 1 / 3, 2.380759321967588, 1e-300, -5e20):
        assert float(format_value(v)) == v
    assert format_value(None) == "" and format_value(True) == "true"


def test_emit_report_formats():
    rep = ExperimentReport("comparison-sum", {"command": "comparison-sum"}, [{"n": 8, "value": 0.5}])
    buf = io.StringIO()
    emit_report(rep, "csv", buf)
    assert buf.getvalue() == "n,value\n8,0.5\n"
    assert ExperimentReport.from_json(emit_report(rep, "json")).to_dict() == rep.to_dict()
    with pytest.raises(ValueError):
        emit_report(rep, "xml")
