import json
import os

import numpy as np
import pytest

from sphtrans.cli import RunConfig, load_config, main, validate_config
from sphtrans.errors import ConfigError


def run_cli(args):
    return main(args)


def test_presets_listing(capsys):
    assert run_cli(["presets"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("name,m_alpha,m_2alpha,rho")
    assert len(lines) == 6  # header + 5 presets
    for name in ("SL2R", "SL2C", "H3", "H4", "CH2"):
        assert any(line.startswith(name + ",") for line in lines[1:])


def test_roundtrip_json_report(tmp_path):
    out = tmp_path / "rt.json"
    rc = run_cli([
        "roundtrip", "--preset", "SL2R", "--symbol", "gauss",
        "--grid=-4:4:17", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["preset"] == "SL2R"
    assert doc["operation"] == "roundtrip"
    assert doc["max_error"] <= 1e-6
    assert len(doc["per_sample"]) == 17


def test_even_grid_count_rejected(capsys):
    rc = run_cli(["transform", "--preset", "SL2R", "--grid=-6:6:10"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "grid.count" in err


def test_asymmetric_spectral_grid_rejected():
    rc = run_cli(["cfun", "--preset", "SL2R", "--grid=-2:6:9"])
    assert rc == 2


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "SL2R", "quadrature": {"rell_tol": 1e-9}}))
    rc = run_cli(["presets", "--config", str(cfg)])
    assert rc == 2
    assert "quadrature.rell_tol" in capsys.readouterr().err


def test_unknown_preset_rejected(capsys):
    rc = run_cli(["phi", "--preset", "NOPE"])
    assert rc == 2
    assert "preset" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "preset": "H3",
        "grid": {"min": 0.0, "max": 2.0, "count": 3},
        "lam": 2.0,
    }))
    rc = run_cli(["phi", "--config", str(cfg), "--preset", "SL2R"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("t,re_phi,im_phi")
    # value at t = 0 is the normalization 1
    first = out.strip().split("\n")[1].split(",")
    assert float(first[1]) == 1.0


def test_cfun_csv_columns(capsys):
    rc = run_cli(["cfun", "--preset", "H3", "--grid=-1:1:5"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == "lambda,re_c,im_c,density"
    # H3 density at lam=1 is lam^2 up to nothing: |c(1)|^-2 = 1
    row = dict(zip(lines[0].split(","), lines[-1].split(",")))
    assert float(row["lambda"]) == 1.0
    np.testing.assert_allclose(float(row["density"]), 1.0, rtol=1e-10)


def test_invert_runs(capsys):
    rc = run_cli(["invert", "--preset", "SL2R", "--symbol", "wide", "--grid", "0:5:6"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("t,re_psi,im_psi")
    assert len(out.strip().split("\n")) == 7


def test_deterministic_csv_bytes(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (p1, p2):
        assert run_cli(["cfun", "--preset", "SL2R", "--grid=-3:3:13", "--out", str(p)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_atomic_write_leaves_no_temp(tmp_path):
    out = tmp_path / "x.csv"
    assert run_cli(["phi", "--preset", "SL2R", "--grid", "0:1:3", "--out", str(out)]) == 0
    assert out.exists()
    leftovers = [n for n in os.listdir(tmp_path) if n.startswith(".sphtrans-")]
    assert leftovers == []


def test_plancherel_report(tmp_path):
    out = tmp_path / "p.json"
    rc = run_cli([
        "plancherel", "--preset", "SL2R", "--symbol", "gauss", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["operation"] == "plancherel"
    assert doc["max_error"] <= 1e-5


def test_seminorm_report(tmp_path):
    out = tmp_path / "s.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "profile": {"family": "gaussian", "width": 1.0},
        "r_values": [0.0, 2.0],
        "k_values": [0, 1],
    }))
    rc = run_cli(["seminorm", "--preset", "SL2R", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert len(doc["reports"]) == 4
    assert all(np.isfinite(r["value"]) for r in doc["reports"])


def test_membership_subcommand(tmp_path):
    out = tmp_path / "m.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"profile": {"family": "counterexample", "symbol": "odd"}}))
    rc = run_cli(["membership", "--preset", "SL2R", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is False
    assert doc["criteria"]["weyl"]["passed"] is False


def test_expansion_subcommand(tmp_path):
    out = tmp_path / "e.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "profile": {"family": "wave_packet", "symbol": "flat4"},
        "lams": [1.0],
        "eps_ladder": [0.2, 0.1],
    }))
    rc = run_cli(["expansion", "--preset", "SL2R", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    errors = [rec["error"] for rec in doc["per_sample"]]
    assert errors[0] > errors[1]
    assert errors[1] < 5e-3


def test_accuracy_failures_exit_3(monkeypatch):
    from sphtrans import cli
    from sphtrans.errors import AccuracyError

    def boom(cfg):
        raise AccuracyError("forced accuracy failure", err_est=1.0)

    monkeypatch.setitem(cli._DISPATCH, "transform", boom)
    assert run_cli(["transform", "--preset", "SL2R"]) == 3


def test_load_config_strictness():
    with pytest.raises(ConfigError) as err:
        load_config({"grids": {}})
    assert err.value.path == "grids"
    cfg = load_config({"preset": "H4"})
    assert cfg.preset == "H4"


def test_validate_config_catches_bad_family():
    cfg = RunConfig()
    cfg.profile.family = "mystery"
    cfg.subcommand = "transform"
    with pytest.raises(ConfigError):
        validate_config(cfg)
