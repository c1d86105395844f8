import json

import numpy as np
import pytest

from slmqudits.runner import (
    CSV_HEADER,
    ExperimentConfig,
    FidelityRecord,
    StateSource,
    config_from_dict,
    config_to_dict,
    default_config,
    emit_results,
    histogram_counts,
    records_to_csv,
    run_bloch_sweep,
    run_period_sweep,
    run_qudit_histogram,
    scaled_source,
    summarize,
)
from slmqudits.tomography import MLEConfig


def tiny_bloch_config(**kwargs):
    defaults = dict(
        scenario="bloch-sweep", method="GD", flicker_levels=(0.0,),
        states=StateSource("bloch_grid", n_theta=3, n_phi=4))
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


class TestScaledSource:
    def test_identity(self):
        src = StateSource("bloch_grid")
        assert scaled_source(src, 1) is src

    def test_default_grid_scale_8(self):
        src = scaled_source(StateSource("bloch_grid"), 8)
        assert (src.n_theta, src.n_phi) == (33, 8)

    def test_default_grid_scale_2(self):
        src = scaled_source(StateSource("bloch_grid"), 2)
        assert (src.n_theta, src.n_phi) == (33, 32)

    def test_haar(self):
        src = scaled_source(StateSource("haar", n=2000), 10)
        assert src.n == 200

    def test_non_divisible(self):
        with pytest.raises(ValueError):
            scaled_source(StateSource("haar", n=2000), 3)
        with pytest.raises(ValueError):
            scaled_source(StateSource("bloch_grid"), 5)


class TestSweeps:
    def test_bloch_sweep_record_count(self):
        config = tiny_bloch_config(method="both", flicker_levels=(0.0, 0.2))
        records = run_bloch_sweep(config)
        assert len(records) == 2 * 2 * 12
        assert {r.method for r in records} == {"PA", "GD"}
        for r in records:
            assert 0.0 <= r.fidelity <= 1 + 1e-10
            assert r.theta is not None and r.phi is not None

    def test_qudit_histogram(self):
        config = ExperimentConfig(
            scenario="qudit-hist", dimension=3, method="GD",
            flicker_levels=(0.2,), states=StateSource("haar", n=5, seed=3))
        records, summary = run_qudit_histogram(config)
        assert len(records) == 5
        (entry,) = summary["scenarios"]
        assert entry["count"] == 5
        assert sum(entry["histogram"]) == 5
        assert entry["mean_fidelity"] > 0.9

    def test_period_sweep(self):
        config = tiny_bloch_config(scenario="period-sweep", periods=(4, 16))
        records = run_period_sweep(config)
        assert {r.period for r in records} == {4, 16}
        by_p = {p: np.mean([r.fidelity for r in records if r.period == p])
                for p in (4, 16)}
        assert by_p[16] > by_p[4]

    def test_workers_do_not_change_results(self):
        serial = run_bloch_sweep(tiny_bloch_config(workers=1))
        parallel = run_bloch_sweep(tiny_bloch_config(workers=2))
        assert records_to_csv(serial) == records_to_csv(parallel)

    def test_bloch_sweep_rejects_qudits(self):
        with pytest.raises(ValueError):
            run_bloch_sweep(ExperimentConfig(
                scenario="bloch-sweep", dimension=3,
                states=StateSource("haar", n=2)))


class TestHistogram:
    def test_all_ones_fill_last_bin(self):
        counts = histogram_counts([1.0, 1.0, 1.0])
        assert len(counts) == 100
        assert counts[-1] == 3
        assert sum(counts) == 3

    def test_empty_is_all_zero(self):
        counts = histogram_counts([])
        assert counts == [0] * 100

    def test_conservation(self):
        rng = np.random.default_rng(0)
        fids = rng.uniform(0, 1, 137)
        assert sum(histogram_counts(fids)) == 137


class TestEmitResults:
    def test_csv_shape_and_header(self, tmp_path):
        config = tiny_bloch_config()
        records = run_bloch_sweep(config)[:3]
        paths = emit_results(records, tmp_path, "bloch-sweep", "csv",
                             config=config)
        text = (tmp_path / "bloch_sweep_records.csv").read_text()
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 4
        assert paths == [str(tmp_path / "bloch_sweep_records.csv")]

    def test_rerun_byte_identical(self, tmp_path):
        config = tiny_bloch_config()
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        for out in (out_a, out_b):
            records = run_bloch_sweep(config)
            emit_results(records, out, "bloch-sweep", "both", config=config)
        assert ((out_a / "bloch_sweep_records.csv").read_bytes()
                == (out_b / "bloch_sweep_records.csv").read_bytes())
        assert ((out_a / "bloch_sweep_summary.json").read_bytes()
                == (out_b / "bloch_sweep_summary.json").read_bytes())

    def test_summary_is_valid_json(self, tmp_path):
        config = tiny_bloch_config()
        records = run_bloch_sweep(config)
        emit_results(records, tmp_path, "bloch-sweep", "json", config=config)
        data = json.loads((tmp_path / "bloch_sweep_summary.json").read_text())
        assert data["schema_version"] == 1
        assert data["scenarios"][0]["count"] == len(records)
        assert "phase_reference" in data["metadata"]

    def test_empty_records_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_results([], tmp_path, "x", "csv")


class TestConfigRoundTrip:
    @pytest.mark.parametrize("scenario", ["bloch-sweep", "qudit-hist", "period-sweep"])
    def test_defaults_round_trip(self, scenario):
        config = default_config(scenario)
        assert config_from_dict(config_to_dict(config)) == config

    def test_defaults_match_paper_parameters(self):
        bloch = default_config("bloch-sweep")
        assert bloch.states.count() == 2112
        assert bloch.flicker_levels == (0.2, 0.3, 0.6)
        assert bloch.period == 16 and bloch.levels == 16
        hist = default_config("qudit-hist")
        assert hist.states.count() == 2000
        period = default_config("period-sweep")
        assert period.periods == (4, 8, 16)
        assert period.flicker_levels == (0.0,)

    def test_unknown_schema_version(self):
        with pytest.raises(ValueError):
            config_from_dict({"schema_version": 99, "scenario": "bloch-sweep"})

    def test_mle_config_carried(self):
        data = config_to_dict(tiny_bloch_config(mle=MLEConfig(max_iterations=17)))
        assert config_from_dict(data).mle.max_iterations == 17


def test_equatorial_min_reported():
    config = tiny_bloch_config(states=StateSource("bloch_grid", n_theta=3, n_phi=2))
    records = run_bloch_sweep(config)
    summary = summarize(records, config)
    assert "equatorial_min_fidelity" in summary["scenarios"][0]
