import json

import numpy as np
import pytest

from slmqudits.cli import main


def test_encode_writes_masks_and_metadata(tmp_path, capsys):
    out = tmp_path / "enc"
    code = main(["encode", "--coeffs", "0.6,0.8j", "--method", "GD",
                 "--period", "16", "--levels", "16", "--out", str(out)])
    assert code == 0
    meta = json.loads((out / "encoding.json").read_text())
    assert len(meta["slits"]) == 2
    assert (out / "slit0.pgm").exists() and (out / "slit1.pgm").exists()
    tokens = (out / "slit0.pgm").read_text().split()
    assert tokens[0] == "P2" and tokens[1] == "16"


def test_tomo_trace_and_json(tmp_path, capsys):
    out = tmp_path / "tomo"
    code = main(["tomo", "--theta", "1.2", "--phi", "0.5", "--method", "GD",
                 "--flicker", "0.3", "--out", str(out)])
    assert code == 0
    lines = capsys.readouterr().out
    assert "fidelity" in lines and "basis 2" in lines
    payload = json.loads((out / "tomo.json").read_text())
    assert 0.9 < payload["fidelity"] <= 1.0
    assert len(payload["frequencies"]) == 3


def test_sweep_with_config_scale_and_seed(tmp_path):
    config = {
        "schema_version": 1,
        "scenario": "qudit-hist",
        "dimension": 3,
        "method": "GD",
        "flicker_levels": [0.2],
        "states": {"kind": "haar", "n": 8, "seed": 1},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    out = tmp_path / "results"
    code = main(["qudit-hist", "--config", str(cfg_path), "--scale", "2",
                 "--seed", "5", "--out", str(out), "--format", "both"])
    assert code == 0
    csv_lines = (out / "qudit_hist_records.csv").read_text().strip().split("\n")
    assert len(csv_lines) == 1 + 4  # header + 8/2 states
    summary = json.loads((out / "qudit_hist_summary.json").read_text())
    assert summary["config"]["states"]["seed"] == 5


def test_period_sweep_cli(tmp_path):
    config = {
        "schema_version": 1,
        "scenario": "period-sweep",
        "method": "GD",
        "periods": [4, 16],
        "flicker_levels": [0.0],
        "states": {"kind": "bloch_grid", "n_theta": 3, "n_phi": 2},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    out = tmp_path / "res"
    assert main(["period-sweep", "--config", str(cfg_path), "--out", str(out),
                 "--format", "csv"]) == 0
    lines = (out / "period_sweep_records.csv").read_text().strip().split("\n")
    assert len(lines) == 1 + 2 * 6


def test_wrong_scenario_config_fails(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"schema_version": 1, "scenario": "qudit-hist",
                                    "states": {"kind": "haar", "n": 2}}))
    code = main(["bloch-sweep", "--config", str(cfg_path)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_bad_coeffs_fail_cleanly(capsys):
    assert main(["encode", "--coeffs", "nope,1"]) == 1
    assert "error:" in capsys.readouterr().err


def test_seed_on_grid_source_rejected(tmp_path, capsys):
    assert main(["bloch-sweep", "--seed", "3", "--out", str(tmp_path)]) == 1
    assert "seed" in capsys.readouterr().err
