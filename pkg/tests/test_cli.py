"""CLI surface: output schemas, exit codes, and byte determinism."""
import json

import pytest

from fgzeta.cli import main, slope_fit, _parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------- cumulants

def test_cumulants_json_schema(capsys):
    code, out, err = run(capsys, "cumulants", "--pmax", "50",
                         "--order", "8")
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["P"] == 50 and doc["order"] == 8
    assert sorted(doc["a"]) == ["0", "2", "4", "6", "8"]
    assert sorted(doc["kappa"]) == ["2", "4", "6", "8"]
    assert doc["kappa"]["2"] == "1.0"
    sigma = float(doc["sigma"])
    assert abs(sigma * sigma - float(doc["a"]["2"])) < 1e-12


def test_cumulants_csv_layout(capsys):
    code, out, _ = run(capsys, "cumulants", "--pmax", "10", "--order", "4",
                       "--format", "csv")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "P,order,a0,a2,a4,sigma,kappa2,kappa4"
    cells = row.split(",")
    assert cells[0] == "10" and cells[1] == "4"
    assert cells[6] == "1.0"


def test_cumulants_to_file(tmp_path, capsys):
    target = tmp_path / "ct.json"
    code, out, _ = run(capsys, "cumulants", "--pmax", "10",
                       "--order", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["P"] == 10


def test_cumulants_usage_errors(capsys):
    assert run(capsys, "cumulants", "--pmax", "1")[0] == 2
    assert run(capsys, "cumulants", "--pmax", "10", "--order", "7")[0] == 2
    assert run(capsys, "cumulants", "--pmax", "10", "--order", "66")[0] == 2
    code, _, err = run(capsys, "cumulants")
    assert code == 2                       # --pmax is required


def test_precision_flag_and_env(capsys, monkeypatch):
    _, out64, _ = run(capsys, "cumulants", "--pmax", "10", "--order", "4",
                      "--precision", "64")
    _, out256, _ = run(capsys, "cumulants", "--pmax", "10", "--order", "4")
    assert out64 != out256
    monkeypatch.setenv("FGZETA_PRECISION", "64")
    _, out_env, _ = run(capsys, "cumulants", "--pmax", "10", "--order", "4")
    assert out_env == out64
    monkeypatch.setenv("FGZETA_PRECISION", "watermelon")
    assert run(capsys, "cumulants", "--pmax", "10", "--order", "4")[0] == 2
    monkeypatch.setenv("FGZETA_PRECISION", "4")
    assert run(capsys, "cumulants", "--pmax", "10", "--order", "4")[0] == 2


# ---------------------------------------------------------------- scan

def test_scan_csv_with_fits(capsys):
    code, out, _ = run(capsys, "scan", "--pmin", "4", "--pmax", "64",
                       "--order", "4")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "P,a2,a4,sigma,kappa4"
    data = [l for l in lines if not l.startswith("#")]
    assert [l.split(",")[0] for l in data[1:]] == ["4", "8", "16", "32", "64"]
    fits = [l for l in lines if l.startswith("# fit,")]
    labels = {f.split(",")[1] for f in fits}
    assert labels == {"log_a2_vs_log_P", "log_kappa4_vs_log_P"}
    assert all("slope=" in f and "r2=" in f and "points=5" in f
               for f in fits)


def test_scan_geometric_grid_and_skip_note(capsys):
    code, out, _ = run(capsys, "scan", "--pmin", "10", "--pmax", "1000",
                       "--grid", "geometric:3", "--order", "4")
    assert code == 0
    lines = out.strip().split("\n")
    assert [l.split(",")[0] for l in lines[1:4]] == ["10", "100", "1000"]
    assert lines[-1] == "# fit skipped: fewer than 4 grid points"


def test_scan_json(capsys):
    code, out, _ = run(capsys, "scan", "--pmin", "4", "--pmax", "64",
                       "--order", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [r["P"] for r in doc["rows"]] == [4, 8, 16, 32, 64]
    assert {f["label"] for f in doc["fits"]} \
        == {"log_a2_vs_log_P", "log_kappa4_vs_log_P"}
    for f in doc["fits"]:
        assert f["points"] == 5 and 0 <= f["r2"] <= 1


def test_scan_usage_errors(capsys):
    assert run(capsys, "scan", "--pmin", "1", "--pmax", "10")[0] == 2
    assert run(capsys, "scan", "--pmin", "100", "--pmax", "10")[0] == 2
    assert run(capsys, "scan", "--pmin", "4", "--pmax", "64",
               "--grid", "linear:5")[0] == 2
    assert run(capsys, "scan", "--pmin", "4", "--pmax", "64",
               "--grid", "geometric:x")[0] == 2
    assert run(capsys, "scan", "--pmin", "4", "--pmax", "64",
               "--grid", "geometric:1")[0] == 2


def test_parse_grid_dedups():
    assert _parse_grid("geometric:5", 10, 11) == (10, 11)
    assert _parse_grid(None, 2, 17) == (2, 4, 8, 16)


def test_slope_fit_recovers_line():
    pts = [(x, 2.5 * x - 1.0) for x in (0.0, 1.0, 2.0, 3.0, 4.0)]
    fit = slope_fit("line", pts)
    assert abs(fit.slope - 2.5) < 1e-12 and abs(fit.r2 - 1.0) < 1e-12
    with pytest.raises(ValueError):
        slope_fit("short", pts[:3])


# --------------------------------------------------------------- fluct

def test_fluct_csv_and_closure(capsys):
    code, out, err = run(capsys, "fluct", "--m", "1", "--pmax", "100",
                         "--quad-tol", "1e-10")
    assert code == 0 and err == ""
    header, row = out.strip().split("\n")
    assert header == "m,P,total,main,boundary,bulkFluct,residual,E_at_P"
    cells = row.split(",")
    assert cells[0] == "1" and cells[1] == "100"
    total, main, boundary, bulk, resid = map(float, cells[2:7])
    # float64 re-parse of the row; exact closure is checked ring-side
    assert abs(total - (main + boundary + bulk + resid)) < 1e-12 * abs(total)
    assert abs(resid) <= 10 * 1e-10 * abs(total)


def test_fluct_k1_only(capsys):
    code, out, _ = run(capsys, "fluct", "--m", "1", "--pmax", "100",
                       "--quad-tol", "1e-10", "--k1-only")
    assert code == 0
    full = run(capsys, "fluct", "--m", "1", "--pmax", "100",
               "--quad-tol", "1e-10")[1]
    # dropping prime powers shrinks the total
    assert float(out.split("\n")[1].split(",")[2]) \
        < float(full.split("\n")[1].split(",")[2])


def test_fluct_starved_precision_exits_one(capsys, monkeypatch):
    monkeypatch.setenv("FGZETA_PRECISION", "64")
    code, _, err = run(capsys, "fluct", "--m", "1", "--pmax", "1000",
                       "--quad-tol", "1e-30")
    assert code == 1
    assert "error" in err


def test_fluct_usage_errors(capsys):
    assert run(capsys, "fluct", "--m", "0", "--pmax", "100")[0] == 2
    assert run(capsys, "fluct", "--m", "1", "--pmax", "1")[0] == 2
    assert run(capsys, "fluct", "--m", "1", "--pmax", "100",
               "--quad-tol", "banana")[0] == 2
    assert run(capsys, "fluct", "--m", "1", "--pmax", "100",
               "--quad-tol", "-1e-10")[0] == 2


# ------------------------------------------------------------ fg-check

def test_fg_check_passes_and_prints_coefficients(capsys):
    code, out, _ = run(capsys, "fg-check", "--order", "8", "--trials", "3")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith(
        "log(multiplicative) coefficients: 1, -1/2, 1/3, -1/4")
    assert lines[-1] == "all properties hold"
    assert all(l.startswith("PASS") for l in lines[1:-1])
    assert any("rejected" in l for l in lines)


def test_fg_check_usage(capsys):
    assert run(capsys, "fg-check", "--order", "34")[0] == 2
    assert run(capsys, "fg-check", "--trials", "0")[0] == 2


# ------------------------------------------------------------- evenize

def _series_doc():
    return {"order": 4, "ring": "rational",
            "coeffs": ["0/1", "1/1", "1/1", "1/1", "0/1"]}


def test_evenize_roundtrip(tmp_path, capsys):
    src = tmp_path / "series.json"
    src.write_text(json.dumps(_series_doc()))
    code, out, _ = run(capsys, "evenize", "--in", str(src))
    assert code == 0
    doc = json.loads(out)
    assert doc["xiLog"]["coeffs"] == ["0/1", "0/1", "1/1", "0/1", "0/1"]
    assert doc["oddRemoved"]["coeffs"] == ["0/1", "1/1", "0/1", "1/1", "0/1"]


def test_evenize_idempotent(tmp_path, capsys):
    src = tmp_path / "series.json"
    src.write_text(json.dumps(_series_doc()))
    _, out, _ = run(capsys, "evenize", "--in", str(src))
    even = json.loads(out)["xiLog"]
    again = tmp_path / "even.json"
    again.write_text(json.dumps(even))
    _, out2, _ = run(capsys, "evenize", "--in", str(again))
    doc2 = json.loads(out2)
    assert doc2["xiLog"] == even
    assert all(c == "0/1" for c in doc2["oddRemoved"]["coeffs"])


def test_evenize_bad_inputs(tmp_path, capsys):
    assert run(capsys, "evenize", "--in", str(tmp_path / "nope.json"))[0] == 2
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run(capsys, "evenize", "--in", str(garbled))[0] == 2
    badtag = tmp_path / "badtag.json"
    badtag.write_text(json.dumps(dict(_series_doc(), ring="decimal")))
    code, _, err = run(capsys, "evenize", "--in", str(badtag))
    assert code == 2 and "malformed ring tag" in err


# -------------------------------------------------------- determinism

@pytest.mark.parametrize("argv", [
    ("cumulants", "--pmax", "50", "--order", "8"),
    ("cumulants", "--pmax", "50", "--order", "8", "--format", "csv"),
    ("scan", "--pmin", "4", "--pmax", "64", "--order", "4"),
    ("fluct", "--m", "1", "--pmax", "100", "--quad-tol", "1e-10"),
    ("fg-check", "--order", "8", "--trials", "4", "--seed", "11"),
])
def test_reruns_are_byte_identical(argv, capsys):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_no_command_is_usage_error(capsys):
    assert run(capsys)[0] == 2
