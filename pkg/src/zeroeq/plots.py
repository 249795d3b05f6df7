"""Static SVG plots of recorded diagnostics.

Output is text SVG with a fixed hash salt and no date metadata, so repeated
runs of the same configuration produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _mpl():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "zeroeq"
    return plt


_SAVE_OPTS = {"format": "svg", "metadata": {"Date": None}}


def plot_norms(series, path: str | Path) -> None:
    plt = _mpl()
    t = series.times
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in ("h1", "h3", "c1", "l1_u"):
        ax.plot(t, series.col(name), label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("norm")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_support(series, path: str | Path) -> None:
    plt = _mpl()
    t = series.times
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, series.col("support_lo"), label="support lo")
    ax.plot(t, series.col("support_hi"), label="support hi")
    ax.set_xlabel("t")
    ax.set_ylabel("x")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_spectrum_decay(field, path: str | Path) -> None:
    from .spectral import to_spectrum

    plt = _mpl()
    g = field.grid
    c = np.abs(to_spectrum(field).coeffs)
    pos = g.mode_numbers >= 0
    xi = g.wavenumbers[pos]
    mag = np.where(c[pos] > 0, c[pos], np.nan)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(xi, mag, ".")
    ax.set_xlabel("wavenumber")
    ax.set_ylabel("|coefficient|")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def plot_flow(flow_maps, path: str | Path, max_trajectories: int = 64) -> None:
    plt = _mpl()
    times = [fm.t for fm in flow_maps]
    n_seeds = flow_maps[0].seeds.size
    step = max(1, n_seeds // max_trajectories)
    fig, ax = plt.subplots(figsize=(6, 4))
    for i in range(0, n_seeds, step):
        ax.plot(times, [fm.positions[i] for fm in flow_maps], lw=0.6, color="tab:blue")
    ax.set_xlabel("t")
    ax.set_ylabel("particle position")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
