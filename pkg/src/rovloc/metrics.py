"""Accuracy metrics for position estimates against ground truth.

Estimates and truth are sampled on different clocks, so scoring first
associates them: truth is linearly interpolated at each estimate
timestamp.  Estimates bracketed by truth always pair; estimates a
little outside the truth span (within clamp_window seconds) clamp to
the nearest endpoint; anything further out is dropped and counted.

Reported numbers: per-axis RMSE, mean Euclidean distance, maximum
Euclidean distance, and per-axis signed-error histograms.  When nothing
pairs at all, the result carries the error tag "empty_overlap" instead
of numbers; callers treat that as data, not as an exception.
"""

from __future__ import annotations

import math

import numpy as np

AXES = ("x", "y", "z")


def associate(
    est_times: np.ndarray,
    truth_times: np.ndarray,
    truth_positions: np.ndarray,
    clamp_window: float = 0.05,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Interpolate truth at estimate times.

    Returns (mask of estimates that paired, truth positions at the
    paired times, number dropped).
    """
    est_times = np.asarray(est_times, dtype=float)
    truth_times = np.asarray(truth_times, dtype=float)
    truth_positions = np.asarray(truth_positions, dtype=float)
    if len(est_times) == 0 or len(truth_times) == 0:
        return np.zeros(len(est_times), dtype=bool), np.empty((0, 3)), len(est_times)

    t0, t1 = truth_times[0], truth_times[-1]
    mask = (est_times >= t0 - clamp_window) & (est_times <= t1 + clamp_window)
    tq = np.clip(est_times[mask], t0, t1)
    paired = np.column_stack(
        [np.interp(tq, truth_times, truth_positions[:, i]) for i in range(3)]
    )
    return mask, paired, int(len(est_times) - mask.sum())


def _axis_hist(col: np.ndarray, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Histogram with a widened range when the data spread is too small
    to cut into distinct finite bins (near-constant errors)."""
    lo, hi = float(np.min(col)), float(np.max(col))
    min_span = np.spacing(max(1.0, abs(lo), abs(hi))) * bins
    if hi - lo < min_span:
        mid = 0.5 * (lo + hi)
        return np.histogram(col, bins=bins,
                            range=(mid - min_span, mid + min_span))
    return np.histogram(col, bins=bins)


def compute_metrics(
    est_times: np.ndarray,
    est_positions: np.ndarray,
    truth_times: np.ndarray,
    truth_positions: np.ndarray,
    clamp_window: float = 0.05,
    hist_bins: int = 20,
) -> dict:
    """Score estimates against interpolated truth; returns a plain dict."""
    est_positions = np.asarray(est_positions, dtype=float).reshape(-1, 3)
    mask, truth_at, dropped = associate(
        est_times, truth_times, truth_positions, clamp_window
    )
    n_pairs = int(mask.sum())
    if n_pairs == 0:
        return {
            "pairs": 0,
            "dropped": dropped,
            "error": "empty_overlap",
            "rmse_x": None,
            "rmse_y": None,
            "rmse_z": None,
            "med": None,
            "max_error": None,
            "hist": None,
        }

    err = est_positions[mask] - truth_at
    dist = np.linalg.norm(err, axis=1)
    # fsum keeps the means correctly rounded, so constant-offset streams
    # score exactly (a 0.3/0.4 offset reads back 0.3, 0.4, 0.5).
    rmse = [
        math.sqrt(math.fsum(float(e) * float(e) for e in err[:, i]) / n_pairs)
        for i in range(3)
    ]
    hist = {}
    for i, axis in enumerate(AXES):
        counts, edges = _axis_hist(err[:, i], hist_bins)
        hist[axis] = {
            "edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        }
    return {
        "pairs": n_pairs,
        "dropped": dropped,
        "rmse_x": float(rmse[0]),
        "rmse_y": float(rmse[1]),
        "rmse_z": float(rmse[2]),
        "med": math.fsum(float(d) for d in dist) / n_pairs,
        "max_error": float(np.max(dist)),
        "hist": hist,
    }


def format_report(metrics: dict) -> str:
    """Human-readable scorecard, millimetre resolution."""
    lines = []
    counts = metrics.get("counts")
    if metrics.get("error"):
        lines.append(f"error: {metrics['error']}")
        lines.append(f"pairs: {metrics['pairs']}  dropped: {metrics['dropped']}")
    else:
        for axis in AXES:
            lines.append(f"rmse {axis}: {metrics['rmse_' + axis]:.3f} m")
        lines.append(f"mean distance: {metrics['med']:.3f} m")
        lines.append(f"max distance: {metrics['max_error']:.3f} m")
        lines.append(f"pairs: {metrics['pairs']}  dropped: {metrics['dropped']}")
    if counts:
        joined = "  ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        lines.append(f"counts: {joined}")
    return "\n".join(lines)
