import json
import subprocess
import sys

import numpy as np
import pytest

from hspart import cli

LN2 = np.log(2.0)


def run(tmp_path, *argv, name="out"):
    path = tmp_path / name
    code = cli.main([*argv, "--output", str(path)])
    return code, (path.read_text() if path.exists() else None)


def parse_csv(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def test_fig1_defaults(tmp_path):
    code, text = run(tmp_path, "fig1")
    assert code == 0
    header, rows = parse_csv(text)
    assert header == ["T", "entropy_density", "reduced_entropy", "gap"]
    assert len(rows) == 60
    for r in rows:
        assert abs(float(r[2]) - LN2) <= 1e-12
        assert float(r[3]) >= 0


def test_fig1_single_row_and_json_matches_csv(tmp_path):
    args = ["fig1", "--sites", "64", "--temp-min", "0.3", "--temp-max", "0.3"]
    code, text = run(tmp_path, *args)
    assert code == 0
    _, rows = parse_csv(text)
    assert len(rows) == 1
    code, jtext = run(tmp_path, *args, "--format", "json", name="out.json")
    assert code == 0
    payload = json.loads(jtext)
    assert payload["columns"] == ["T", "entropy_density", "reduced_entropy", "gap"]
    for col, val in zip(payload["columns"], rows[0]):
        assert payload["rows"][0][col] == pytest.approx(float(val), abs=1e-15)


def test_quench(tmp_path):
    code, text = run(tmp_path, "quench", "--sites", "16", "--t-max", "2", "--t-points", "3", "--residual")
    assert code == 0
    header, rows = parse_csv(text)
    assert header == ["t", "site", "occupancy", "entropy_density", "entropy_current", "continuity_residual"]
    assert len(rows) == 48
    t0 = [r for r in rows if float(r[0]) == 0.0]
    assert [float(r[2]) for r in t0] == [0.9] * 8 + [0.1] * 8
    assert max(float(r[5]) for r in rows) <= 1e-8
    totals = {}
    for r in rows:
        totals.setdefault(r[0], 0.0)
        totals[r[0]] += float(r[3])
    assert max(totals.values()) - min(totals.values()) <= 1e-9


def test_quench_flat_has_no_current(tmp_path):
    code, text = run(tmp_path, "quench", "--sites", "8", "--f-left", "0.5", "--f-right", "0.5", "--t-points", "2")
    assert code == 0
    _, rows = parse_csv(text)
    assert all(abs(float(r[4])) < 1e-13 for r in rows)


def test_alpha_scan(tmp_path):
    code, text = run(tmp_path, "alpha-scan")
    assert code == 0
    header, rows = parse_csv(text)
    assert header == ["alpha", "eps", "entropy", "predicted_slope", "fitted_slope"]
    by_alpha = {}
    for r in rows:
        by_alpha.setdefault(float(r[0]), (float(r[3]), float(r[4])))
    assert set(by_alpha) == {0.0, 0.25, 0.5, 0.75, 1.0}
    assert abs(by_alpha[0.5][1]) <= 1e-6
    for alpha in (0.0, 0.25, 0.75, 1.0):
        w, slope = by_alpha[alpha]
        assert abs(slope - w) <= 0.01 * abs(w)
        assert np.sign(w) == np.sign(1 - 2 * alpha)


def test_oracle_report(tmp_path):
    code, text = run(tmp_path, "oracle", "--format", "json")
    assert code == 0
    payload = json.loads(text)
    assert payload["meta"]["failed"] == 0
    assert all(r["status"] == "PASS" for r in payload["rows"])
    div = [r for r in payload["rows"] if r["expected"] == "divergent"]
    assert div and div[0]["value"] in ("inf", "-inf")


def test_oracle_tampered_tolerance(tmp_path):
    code, text = run(tmp_path, "oracle", "--tolerance", "1e-16")
    assert code == 3
    assert "FAIL" in text


def test_energy_current(tmp_path):
    code, text = run(tmp_path, "energy-current", "--sites", "12", "--site", "5")
    assert code == 0
    header, rows = parse_csv(text)
    assert header == ["n", "m", "re", "im", "distance", "deviation"]
    assert {int(r[4]) for r in rows} == {2}
    for r in rows:
        assert abs(complex(float(r[2]), float(r[3]))) == pytest.approx(0.5, abs=1e-14)
        assert float(r[5]) <= 1e-12
    code, text = run(tmp_path, "energy-current", "--sites", "12", "--site", "0", name="edge")
    assert code == 0
    assert len(parse_csv(text)[1]) > 0
    code, text = run(tmp_path, "energy-current", "--hopping", "0", name="zero")
    assert code == 0 and parse_csv(text)[1] == []


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nsites = 32\ntemp-min = 0.5\n--temp-max = 0.5\n")
    code, text = run(tmp_path, "fig1", "--config", str(cfg), "--sites", "16")
    assert code == 0
    code2, text2 = run(tmp_path, "fig1", "--sites", "16", "--temp-min", "0.5", "--temp-max", "0.5", name="b")
    assert text == text2


@pytest.mark.parametrize(
    "argv",
    [
        ["fig1", "--format", "xml"],
        ["fig1", "--sites", "1"],
        ["fig1", "--boundary", "twisted"],
        ["fig1", "--temp-min", "-1"],
        ["quench", "--f-left", "1.0"],
        ["alpha-scan", "--eps-grid", "1e-3,1e-4"],
        ["alpha-scan", "--subset", "99"],
        ["energy-current", "--site", "40"],
        ["nonsense"],
        ["fig1", "--no-such-flag"],
        ["fig1", "--sites", "many"],
    ],
)
def test_config_errors_exit_2(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == 2


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("unknown = 3\n")
    assert run(tmp_path, "fig1", "--config", str(cfg))[0] == 2
    assert run(tmp_path, "fig1", "--config", str(tmp_path / "missing.cfg"))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["fig1", "--sites", "128", "--temp-points", "7"],
        ["quench", "--sites", "16", "--t-points", "4"],
        ["alpha-scan"],
        ["oracle", "--seed", "11"],
        ["energy-current", "--sites", "10"],
    ],
)
def test_determinism(tmp_path, argv):
    for fmt in ("csv", "json"):
        _, a = run(tmp_path, *argv, "--format", fmt, name="a")
        _, b = run(tmp_path, *argv, "--format", fmt, name="b")
        assert a == b and a


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "hspart", "energy-current", "--sites", "6"], capture_output=True, text=True, check=True
    )
    assert out.stdout.startswith("n,m,re,im,distance,deviation\n")
