import csv
import io
import json
import math
import subprocess
import sys

import pytest

from squeezelab.cli import render, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_energy_svs_has_negative_entries(capsys):
    code, out, _ = invoke(capsys, "energy", "--family", "svs", "--r", "1", "--grid", "64")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 64
    assert list(rows[0]) == ["theta", "t00"]
    assert any(float(r["t00"]) < 0 for r in rows)


def test_energy_empty_grid_header_only(capsys):
    code, out, _ = invoke(capsys, "energy", "--family", "svs", "--r", "1", "--grid", "0")
    assert code == 0
    assert out == "theta,t00\n"


def test_energy_coherent_minimum_zero(capsys):
    _, out, _ = invoke(capsys, "energy", "--family", "coherent", "--alpha", "1")
    assert min(float(r["t00"]) for r in parse_csv(out)) == pytest.approx(0, abs=1e-10)


def test_variance_first_kind(capsys):
    code, out, _ = invoke(capsys, "variance", "--family", "first-kind-svs", "--r", "1", "--l", "2")
    assert code == 0
    (row,) = parse_csv(out)
    assert float(row["var_x"]) == pytest.approx(float(row["var_p"]), abs=1e-11)
    assert float(row["var_x"]) > 0.25
    assert row["squeezed"] == "false"


def test_variance_two_mode(capsys):
    _, out, _ = invoke(capsys, "variance", "--family", "tmsv", "--r", "1")
    (row,) = parse_csv(out)
    assert float(row["var_x1"]) == pytest.approx(math.exp(-2) / 4, abs=1e-11)


def test_state_command(capsys):
    _, out, _ = invoke(capsys, "state", "--family", "svs", "--r", "0.5")
    rows = parse_csv(out)
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1, abs=1e-10)
    assert all(float(r["probability"]) == 0 for r in rows if int(r["n"]) % 2)


def test_higher_order_command(capsys):
    _, out, _ = invoke(capsys, "higher-order", "--family", "coherent", "--alpha", "0")
    rows = parse_csv(out)
    kinds = [r["kind"] for r in rows]
    assert kinds == ["hong-mandel", "hong-mandel", "hillery-y1", "hillery-y2"]
    assert float(rows[0]["value"]) == pytest.approx(3 / 16)


def test_optimize_command(capsys):
    _, out, _ = invoke(capsys, "optimize", "--r-list", "0.5,1", "--method", "both", "--format", "json")
    data = json.loads(out)["data"]
    assert [d["method"] for d in data] == ["eigen", "simplex"]
    assert data[0]["variance"] == pytest.approx(data[1]["variance"], abs=1e-9)


def test_table1_json(capsys):
    code, out, _ = invoke(capsys, "table1", "--format", "json", "--seed", "7")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["data"]) == 4
    assert payload["meta"]["command"] == "table1"
    assert payload["meta"]["seed"] == 7
    assert {"tool", "version", "parameters"} <= set(payload["meta"])
    assert "pass" in payload["data"][0]


def test_table1_csv_has_pass_column(capsys):
    _, out, _ = invoke(capsys, "table1")
    rows = parse_csv(out)
    assert len(rows) == 4
    assert [r["pass"] for r in rows] == ["true"] * 4


def test_csv_round_trip(capsys):
    _, out, _ = invoke(capsys, "energy", "--family", "even-cat", "--alpha", "1.3", "--grid", "16")
    for row in parse_csv(out):
        theta = float(row["theta"])
        assert theta == float(format(theta, ".12g"))
    assert out.endswith("\n") and "\r" not in out


def test_render_is_stable():
    rows = [{"x": 0.1 + 0.2, "flag": True, "pair": (1.0, 2.5)}]
    text = render(rows, ["x", "flag", "pair"], "csv", {})
    assert text == "x,flag,pair\n0.3,true,1;2.5\n"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# squeezed vacuum\nfamily = svs\nr = 1\ngrid = 8\n")
    _, out, _ = invoke(capsys, "energy", "--config", str(cfg))
    assert len(parse_csv(out)) == 8
    _, out, _ = invoke(capsys, "energy", "--config", str(cfg), "--grid", "4")
    assert len(parse_csv(out)) == 4


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = invoke(capsys, "energy", "--config", str(cfg))
    assert code == 2
    assert err.startswith("squeezelab-error ")


@pytest.mark.parametrize(
    "argv",
    [
        ["variance", "--family", "svs", "--r", "5"],
        ["variance", "--family", "svs"],
        ["variance", "--family", "wigner", "--r", "1"],
        ["energy", "--family", "svs", "--r", "1", "--grid", "-3"],
        ["optimize", "--r-list", "0.5,0.5", "--method", "eigen", "--seed", "-1"],
    ],
)
def test_validation_errors_exit_two(argv, capsys):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1 and err.startswith("squeezelab-error ")


def test_numeric_errors_exit_three(capsys):
    code, _, err = invoke(capsys, "optimize", "--r-list", "0.5,0.5", "--method", "eigen")
    assert code == 3
    assert "squeezelab-error" in err


def test_cutoff_too_small_exit_three(capsys):
    code, _, err = invoke(capsys, "variance", "--family", "svs", "--r", "1.5", "--cutoff", "6")
    assert code == 3
    assert err.startswith("squeezelab-error cutoff-too-small")


def test_invalid_params_leave_no_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _, _ = invoke(capsys, "variance", "--family", "svs", "--r", "9", "--output", str(target))
    assert code == 2
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_output_file_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(["optimize", "--r-list", "0.5,0.8,1", "--seed", "3", "--format", "json", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "squeezelab", "variance", "--family", "coherent", "--alpha", "1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.startswith("family,var_x,var_p")
