"""Diagnostic figures for a scored run.

Everything renders through the Agg backend so plots work headless; each
function writes one PNG and returns its path.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import AXES, associate


def plot_track(est_times, est_positions, truth_times, truth_positions,
               out_path: str) -> str:
    """Top-down track and depth profile: truth line, estimate dots."""
    est_positions = np.asarray(est_positions, dtype=float).reshape(-1, 3)
    truth_positions = np.asarray(truth_positions, dtype=float).reshape(-1, 3)
    fig, (ax_xy, ax_z) = plt.subplots(
        2, 1, figsize=(8, 8), gridspec_kw={"height_ratios": [3, 1]}
    )
    if len(truth_positions):
        ax_xy.plot(truth_positions[:, 0], truth_positions[:, 1], "-",
                   color="0.6", label="truth")
        ax_z.plot(truth_times, truth_positions[:, 2], "-", color="0.6")
    if len(est_positions):
        ax_xy.plot(est_positions[:, 0], est_positions[:, 1], ".", ms=3,
                   color="tab:blue", label="estimate")
        ax_z.plot(est_times, est_positions[:, 2], ".", ms=3, color="tab:blue")
    ax_xy.set_xlabel("x [m]")
    ax_xy.set_ylabel("y [m]")
    ax_xy.set_aspect("equal", adjustable="datalim")
    ax_xy.legend(loc="best")
    ax_xy.set_title("top-down track")
    ax_z.set_xlabel("t [s]")
    ax_z.set_ylabel("z [m]")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def plot_errors(est_times, est_positions, truth_times, truth_positions,
                out_path: str) -> str:
    """Euclidean error over time plus per-axis error histograms."""
    est_times = np.asarray(est_times, dtype=float)
    est_positions = np.asarray(est_positions, dtype=float).reshape(-1, 3)
    mask, truth_at, _ = associate(est_times, truth_times,
                                  np.asarray(truth_positions, dtype=float))
    fig, (ax_t, ax_h) = plt.subplots(1, 2, figsize=(10, 4))
    if mask.any():
        err = est_positions[mask] - truth_at
        dist = np.linalg.norm(err, axis=1)
        ax_t.plot(est_times[mask], dist, ".", ms=3)
        for i, axis in enumerate(AXES):
            ax_h.hist(err[:, i], bins=20, alpha=0.5, label=axis)
        ax_h.legend(loc="best")
    ax_t.set_xlabel("t [s]")
    ax_t.set_ylabel("position error [m]")
    ax_t.set_title("error over time")
    ax_h.set_xlabel("per-axis error [m]")
    ax_h.set_ylabel("count")
    ax_h.set_title("error distribution")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
