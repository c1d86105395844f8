"""Acceptance gate: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion. The heavyweight sweeps (the reduced Bloch grids and the
method-comparison ensembles) are computed once in session fixtures and
shared between criteria.
"""

import numpy as np
import pytest

from slmqudits import (
    FlickerSpec,
    MLEConfig,
    encode_state,
    encoded_masks,
    fidelity,
    first_order_coefficients,
    first_order_efficiency,
    flicker_scales,
    mle_reconstruct,
    mub_bases,
    normalize_state,
    sample_haar,
)
from slmqudits.runner import (
    ExperimentConfig,
    StateSource,
    emit_results,
    records_to_csv,
    run_period_sweep,
    run_qudit_histogram,
    scaled_source,
)
from slmqudits.states import BlochAngles, bloch_state

WORKERS = 2


def report(name: str, ok: bool) -> bool:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    return ok


@pytest.fixture(scope="session")
def reduced_period_sweep():
    """Flicker-free GD Bloch sweep at p in {4, 8, 16} on the scale-8 grid."""
    config = ExperimentConfig(
        scenario="period-sweep", method="GD", flicker_levels=(0.0,),
        periods=(4, 8, 16), states=scaled_source(StateSource("bloch_grid"), 8),
        workers=WORKERS)
    records = run_period_sweep(config)
    assert config.states.count() == 264
    return {p: [r for r in records if r.period == p] for p in (4, 8, 16)}


@pytest.fixture(scope="session")
def method_comparison():
    """Mean/std fidelity per (D, method, a) over 200 Haar states each."""
    stats = {}
    for dim in (2, 3, 7):
        config = ExperimentConfig(
            scenario="qudit-hist", dimension=dim, method="both",
            flicker_levels=(0.2, 0.3, 0.6),
            states=scaled_source(StateSource("haar", n=2000, seed=7), 10),
            workers=WORKERS)
        records, _ = run_qudit_histogram(config)
        for method in ("GD", "PA"):
            for a in (0.2, 0.3, 0.6):
                fids = np.array([r.fidelity for r in records
                                 if r.method == method and r.flicker_a == a])
                assert len(fids) == 200
                stats[(dim, method, a)] = (fids.mean(), fids.std())
    return stats


def test_efficiency_law():
    ok = (abs(first_order_efficiency(2 * np.pi) - 1.0) < 1e-12
          and abs(first_order_efficiency(np.pi) - 4 / np.pi**2) < 1e-12)
    assert report("efficiency law (eff(2pi)=1, eff(pi)=4/pi^2, 1e-12)", ok)


def test_shift_theorem():
    rng = np.random.default_rng(2024)
    p = 16
    masks = rng.uniform(0.0, 2 * np.pi, (1000, p))
    base = first_order_coefficients(masks)
    worst = 0.0
    for delta in range(p):
        shifted = first_order_coefficients(np.roll(masks, -delta, axis=1))
        err = np.angle(shifted * np.conj(base) * np.exp(-2j * np.pi * delta / p))
        worst = max(worst, np.max(np.abs(err)))
    assert report(f"shift theorem (1000 masks, all delta, worst {worst:.2e})",
                  worst < 1e-12)


def test_mub_suite():
    ok = True
    for dim in (2, 3, 7):
        bases = mub_bases(dim).bases
        for j, bj in enumerate(bases):
            ok &= bool(np.max(np.abs(bj @ bj.conj().T - np.eye(dim))) < 1e-12)
            for bl in bases[j + 1:]:
                overlap = np.abs(bj.conj() @ bl.T) ** 2
                ok &= bool(np.max(np.abs(overlap - 1 / dim)) < 1e-12)
    assert report("MUB suite (D in {2,3,7}, orthonormal + 1/D overlaps, 1e-12)", ok)


def test_mle_oracle():
    config = MLEConfig(max_iterations=20000, convergence_epsilon=1e-12)
    worst = 1.0
    for dim in (2, 3, 7):
        projectors = mub_bases(dim)
        stacked = projectors.stacked()
        for state in sample_haar(dim, 100, seed=1000 + dim):
            freqs = np.abs(stacked.conj() @ state.coeffs) ** 2
            freqs = freqs.reshape(dim + 1, dim)
            freqs /= freqs.sum(axis=1, keepdims=True)
            result = mle_reconstruct(freqs, projectors, config)
            worst = min(worst, fidelity(state, result.rho))
    assert report(f"MLE oracle (300 Haar states, worst F {worst:.9f})",
                  worst >= 1 - 1e-6)


def test_flicker_free_gd_quality(reduced_period_sweep):
    fids = np.array([r.fidelity for r in reduced_period_sweep[16]])
    ok = len(fids) == 264 and fids.min() >= 0.999 and fids.mean() >= 0.9995
    assert report(
        f"flicker-free GD quality (264 states, min {fids.min():.6f}, "
        f"mean {fids.mean():.6f})", ok)


def test_period_ordering(reduced_period_sweep):
    means = {p: np.mean([r.fidelity for r in recs])
             for p, recs in reduced_period_sweep.items()}
    eq4 = min(r.fidelity for r in reduced_period_sweep[4]
              if abs(r.theta - np.pi / 2) < 1e-12)
    min16 = min(r.fidelity for r in reduced_period_sweep[16])
    ok = (means[16] > means[8] > means[4]
          and eq4 >= np.cos(np.pi / 8) ** 2 - 1e-6
          and eq4 < min16)
    assert report(
        f"period ordering (means p16/p8/p4 {means[16]:.6f}/{means[8]:.6f}/"
        f"{means[4]:.6f}, p4 equatorial min {eq4:.6f})", ok)


def test_method_comparison(method_comparison):
    ok = True
    for dim in (2, 3, 7):
        for a in (0.2, 0.3, 0.6):
            gd_mean, gd_std = method_comparison[(dim, "GD", a)]
            pa_mean, pa_std = method_comparison[(dim, "PA", a)]
            ok &= gd_mean > pa_mean and gd_std < pa_std
    assert report("method comparison (GD mean > PA mean, GD std < PA std, "
                  "all (D, a))", ok)


def test_gd_flicker_insensitivity(method_comparison):
    drift = abs(method_comparison[(2, "GD", 0.6)][0]
                - method_comparison[(2, "GD", 0.2)][0])
    assert report(f"GD flicker insensitivity (D=2 mean drift {drift:.5f} < 0.02)",
                  drift < 0.02)


def test_equal_amplitude_exactness():
    p = 16
    worst = 0.0
    for phi in (-2.8, -np.pi / 3, 0.4, np.pi / 2, 2.9):
        target = bloch_state(BlochAngles(np.pi / 2, phi))
        enc = encode_state(target, "GD", p, p)
        masks = encoded_masks(enc)
        deltas = [g.displacement_delta for g in enc.gratings]
        expected = 2 * np.pi * (deltas[1] - deltas[0]) / p
        for a in (0.2, 0.6):
            scales = flicker_scales(FlickerSpec(a, 32))
            coeffs = first_order_coefficients(scales[:, None, None] * masks[None])
            rel = np.angle(coeffs[:, 1] * np.conj(coeffs[:, 0])
                           * np.exp(-1j * expected))
            worst = max(worst, np.max(np.abs(rel)))
    assert report(
        f"equal-amplitude exactness (equatorial GD, worst phase dev {worst:.2e})",
        worst < 1e-12)


def test_determinism(tmp_path):
    config = ExperimentConfig(
        scenario="qudit-hist", dimension=3, method="both",
        flicker_levels=(0.2, 0.6),
        states=StateSource("haar", n=10, seed=7), workers=WORKERS)
    outputs = []
    for run in ("a", "b"):
        records, summary = run_qudit_histogram(config)
        out = tmp_path / run
        emit_results(records, out, "qudit-hist", "both", summary=summary)
        outputs.append(((out / "qudit_hist_records.csv").read_bytes(),
                        (out / "qudit_hist_summary.json").read_bytes()))
    ok = outputs[0] == outputs[1]
    assert report("determinism (rerun yields byte-identical CSV and JSON)", ok)
