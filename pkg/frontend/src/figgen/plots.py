"""The three figure kinds: Bloch fidelity maps, histograms, flicker waveforms.

Rendering is deterministic for fixed inputs: the Agg/SVG backends run with a
fixed DPI, the bundled fonts, a pinned svg hash salt, and no date metadata.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figgen"

import matplotlib.pyplot as plt
import numpy as np

from .io import EmptyDataError, SchemaError, group_key

DPI = 150
HISTOGRAM_BINS = 100


@dataclass(frozen=True)
class FigureJob:
    """One rendering task: where to read, what to draw, where to write."""

    kind: str
    inputs: tuple = ()
    output: str = "figure.png"
    vmin: float | None = None
    vmax: float = 1.0
    method: str | None = None
    flicker_a: float | None = None
    dim: int | None = None
    levels: tuple = (np.pi / 2, np.pi, 3 * np.pi / 2, 2 * np.pi)
    amplitude: float = 0.2
    periods: int = 2


def _save(fig, path):
    ext = os.path.splitext(path)[1].lower()
    if ext == ".svg":
        fig.savefig(path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(path, dpi=DPI)
    plt.close(fig)


def _suffixed(path, method, flicker_a):
    stem, ext = os.path.splitext(path)
    return f"{stem}_{method}_a{flicker_a:g}{ext}"


def histogram_bins(fidelities) -> np.ndarray:
    """Occurrence counts on the contract's 100 bins of width 0.01 on [0, 1]."""
    clipped = np.clip(np.asarray(list(fidelities), dtype=float), 0.0, 1.0)
    counts, _ = np.histogram(clipped, bins=np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1))
    return counts


def bloch_grid(records):
    """Pivot qubit records into (thetas, phis, fidelity matrix).

    Every grid cell must be filled exactly; a sparse or ragged grid means
    the CSV does not describe a full Bloch sweep.
    """
    if not records:
        raise EmptyDataError("no records to grid")
    if any(r.theta is None or r.phi is None for r in records):
        raise SchemaError("bloch_heatmap needs theta/phi values on every row")
    thetas = np.array(sorted({r.theta for r in records}))
    phis = np.array(sorted({r.phi for r in records}))
    grid = np.full((len(thetas), len(phis)), np.nan)
    t_index = {t: i for i, t in enumerate(thetas)}
    p_index = {p: j for j, p in enumerate(phis)}
    for r in records:
        grid[t_index[r.theta], p_index[r.phi]] = r.fidelity
    if np.isnan(grid).any():
        missing = int(np.isnan(grid).sum())
        raise SchemaError(f"incomplete Bloch grid: {missing} missing cells")
    return thetas, phis, grid


def render_bloch_heatmap(job: FigureJob, records) -> list[str]:
    """Fidelity-colored Bloch spheres, one image per (method, flicker) pair."""
    groups = {}
    for r in records:
        groups.setdefault(group_key(r), []).append(r)
    if not groups:
        raise EmptyDataError("no records for bloch_heatmap")
    written = []
    multi = len(groups) > 1
    for (method, flicker_a), recs in sorted(groups.items()):
        thetas, phis, grid = bloch_grid(recs)
        vmin = job.vmin if job.vmin is not None else float(grid.min())
        if vmin >= job.vmax:
            vmin = job.vmax - 1e-6

        # close the longitude seam for a watertight surface
        phis_c = np.concatenate([phis, phis[:1] + 2 * np.pi])
        grid_c = np.concatenate([grid, grid[:, :1]], axis=1)
        T, P = np.meshgrid(thetas, phis_c, indexing="ij")
        x = np.sin(T) * np.cos(P)
        y = np.sin(T) * np.sin(P)
        z = np.cos(T)

        norm = plt.Normalize(vmin=vmin, vmax=job.vmax)
        cmap = plt.get_cmap("viridis")
        # facecolors are per quad: average the corner values
        face = 0.25 * (grid_c[:-1, :-1] + grid_c[1:, :-1]
                       + grid_c[:-1, 1:] + grid_c[1:, 1:])

        fig = plt.figure(figsize=(5.2, 4.6))
        ax = fig.add_subplot(111, projection="3d")
        ax.plot_surface(x, y, z, facecolors=cmap(norm(face)),
                        rstride=1, cstride=1, linewidth=0, antialiased=False,
                        shade=False)
        ax.set_box_aspect((1, 1, 1))
        ax.set_axis_off()
        ax.view_init(elev=18, azim=-60)
        mappable = plt.cm.ScalarMappable(norm=norm, cmap=cmap)
        fig.colorbar(mappable, ax=ax, shrink=0.7, label="fidelity")
        fids = [r.fidelity for r in recs]
        ax.set_title(f"{method}, flicker {flicker_a:g}")
        fig.text(0.02, 0.02,
                 f"mean F = {np.mean(fids):.4f} +/- {np.std(fids):.4f}",
                 fontsize=9)
        path = _suffixed(job.output, method, flicker_a) if multi else job.output
        _save(fig, path)
        written.append(path)
    return written


def render_histogram(job: FigureJob, records) -> list[str]:
    """Occurrence histogram of fidelities for one (D, method, flicker) tuple."""
    if not records:
        raise EmptyDataError("no records for histogram")
    keys = {(r.dim, r.method, r.flicker_a) for r in records}
    if len(keys) > 1:
        raise ValueError(
            "histogram needs a single (D, method, flicker) selection; "
            f"got {sorted(keys)} (use the method/flicker/dim filters)")
    ((dim, method, flicker_a),) = keys
    fids = [r.fidelity for r in records]
    counts = histogram_bins(fids)
    edges = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)

    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    ax.bar(edges[:-1], counts, width=0.01, align="edge", color="#31729b")
    ax.set_xlabel("fidelity")
    ax.set_ylabel("occurrences")
    ax.set_title(f"D={dim}, {method}, flicker {flicker_a:g}")
    ax.text(0.03, 0.92,
            f"mean F = {np.mean(fids):.4f} +/- {np.std(fids):.4f}",
            transform=ax.transAxes, fontsize=9)
    lo = min(0.98, edges[np.nonzero(counts)[0][0]]) if counts.any() else 0.0
    ax.set_xlim(lo, 1.0)
    fig.tight_layout()
    _save(fig, job.output)
    return [job.output]


def waveform_curves(levels, amplitude, periods, samples_per_period=256):
    """Displayed phase vs time for a set of addressed levels.

    Each addressed level phi traces phi * (1 + a * w(t)) with the zero-mean
    unit triangle w; peak-to-peak excursion is 2 * a * phi.
    """
    t = np.arange(periods * samples_per_period) / samples_per_period
    frac = np.mod(t, 1.0)
    wave = np.where(frac < 0.5, 4 * frac - 1, 3 - 4 * frac)
    curves = [(level, level * (1.0 + amplitude * wave)) for level in levels]
    return t, curves


def render_waveform(job: FigureJob, records=None) -> list[str]:
    """Triangular flicker traces for the configured phase levels."""
    t, curves = waveform_curves(job.levels, job.amplitude, job.periods)
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    for level, curve in curves:
        ax.plot(t, curve, label=f"{level / np.pi:.2f} pi")
    ax.set_xlabel("time (frame periods)")
    ax.set_ylabel("displayed phase (rad)")
    ax.set_title(f"flicker {job.amplitude:g} of the addressed phase")
    ax.legend(fontsize=8, loc="upper right")
    fig.tight_layout()
    _save(fig, job.output)
    return [job.output]
