import math

import numpy as np

from rovloc.metrics import associate, compute_metrics, format_report


def constant_offset_run(n=50, offset=(0.3, 0.4, 0.0)):
    # Zero truth keeps the offset arithmetic exact in floating point.
    t = np.linspace(0.0, 5.0, n)
    truth = np.zeros((n, 3))
    est = truth + np.asarray(offset)
    return t, est, truth


def test_constant_offset_is_three_four_five():
    t, est, truth = constant_offset_run()
    m = compute_metrics(t, est, t, truth)
    assert m["rmse_x"] == 0.3
    assert m["rmse_y"] == 0.4
    assert m["rmse_z"] == 0.0
    assert m["med"] == 0.5
    assert m["max_error"] == 0.5
    assert m["pairs"] == 50 and m["dropped"] == 0


def test_alternating_offset_rmse_vs_mean():
    # +0.1/-0.1 on x: RMSE 0.1, MED 0.1, mean signed error 0.
    t = np.arange(10, dtype=float)
    truth = np.zeros((10, 3))
    est = truth.copy()
    est[:, 0] = np.where(np.arange(10) % 2 == 0, 0.1, -0.1)
    m = compute_metrics(t, est, t, truth)
    assert math.isclose(m["rmse_x"], 0.1, rel_tol=1e-12)
    assert math.isclose(m["med"], 0.1, rel_tol=1e-12)


def test_associate_interpolates_between_truth_samples():
    truth_t = np.array([0.0, 1.0])
    truth_p = np.array([[0.0, 0.0, 0.0], [2.0, -4.0, 1.0]])
    mask, paired, dropped = associate(np.array([0.25]), truth_t, truth_p)
    assert mask.all() and dropped == 0
    assert np.allclose(paired[0], [0.5, -1.0, 0.25])


def test_associate_clamps_nearby_and_drops_far():
    truth_t = np.array([1.0, 2.0])
    truth_p = np.tile([[1.0, 2.0, 3.0]], (2, 1))
    est_t = np.array([0.96, 2.04, 2.2])
    mask, paired, dropped = associate(est_t, truth_t, truth_p, clamp_window=0.05)
    assert list(mask) == [True, True, False]
    assert dropped == 1
    # Clamped queries read the endpoint values.
    assert np.allclose(paired, [[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])


def test_empty_overlap_is_tagged_not_raised():
    t_est = np.array([10.0, 11.0])
    t_truth = np.array([0.0, 1.0])
    p = np.zeros((2, 3))
    m = compute_metrics(t_est, p, t_truth, p)
    assert m["error"] == "empty_overlap"
    assert m["pairs"] == 0 and m["dropped"] == 2
    assert m["med"] is None and m["hist"] is None
    report = format_report(m)
    assert "empty_overlap" in report


def test_med_bounded_by_rmse_norm():
    # Mean of a norm never exceeds the rms of the norm, which equals
    # the quadrature sum of the per-axis RMSEs.
    rng = np.random.default_rng(7)
    t = np.arange(200, dtype=float)
    truth = rng.normal(size=(200, 3))
    est = truth + rng.normal(scale=0.2, size=(200, 3))
    m = compute_metrics(t, est, t, truth)
    bound = math.sqrt(m["rmse_x"] ** 2 + m["rmse_y"] ** 2 + m["rmse_z"] ** 2)
    assert m["med"] <= bound + 1e-12
    assert m["max_error"] >= m["med"]


def test_histogram_covers_all_pairs():
    t, est, truth = constant_offset_run(n=80)
    m = compute_metrics(t, est, t, truth, hist_bins=10)
    for axis in ("x", "y", "z"):
        h = m["hist"][axis]
        assert len(h["edges"]) == len(h["counts"]) + 1
        assert sum(h["counts"]) == m["pairs"]
        assert all(a < b for a, b in zip(h["edges"], h["edges"][1:]))
    # z errors are identically zero, so a single bin holds everything.
    assert max(m["hist"]["z"]["counts"]) == 80


def test_format_report_millimetre_resolution():
    t, est, truth = constant_offset_run()
    m = compute_metrics(t, est, t, truth)
    m["counts"] = {"detections": 50, "solved": 50}
    report = format_report(m)
    assert "rmse x: 0.300 m" in report
    assert "rmse y: 0.400 m" in report
    assert "mean distance: 0.500 m" in report
    assert "pairs: 50  dropped: 0" in report
    assert "counts: detections=50  solved=50" in report
