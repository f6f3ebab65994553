"""Replay a recorded dataset through the full positioning stack.

The pipeline consumes records in dataset order and maintains exactly
the state a live system would: the roll/pitch filter advances on every
IMU record, the latest planar SLAM fix and target depth are cached, and
each sonar detection is solved against that context the moment it
arrives.  Ground-truth records are set aside for scoring and never
influence an estimate.

Solver failures do not abort a run; each failure code is tallied so a
run reports how many detections it could not turn into positions and
why.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attitude import (
    AttitudeEkf,
    EkfConfig,
    MeasurementRejected,
    PlanarFix,
    fuse_asv_pose,
)
from .metrics import compute_metrics
from .scenario import scenario_from_header
from .solver import SolverConfig, SolverError, solve_position
from .sonar import pixel_to_polar


@dataclass
class PipelineResult:
    """Estimates plus the ground truth and bookkeeping needed to score them."""

    times: np.ndarray
    positions: np.ndarray
    truth_times: np.ndarray
    truth_positions: np.ndarray
    counts: dict = field(default_factory=dict)


def replay(
    header: dict,
    records: list[dict],
    ekf_cfg: EkfConfig | None = None,
    solver_cfg: SolverConfig | None = None,
) -> PipelineResult:
    """Run the estimation stack over one dataset.

    counts in the result tallies, per detection, whether it was solved
    or why not ("no_context" when it arrived before the first SLAM fix
    or depth sample, otherwise the solver failure code), plus
    "imu_rejected" for accelerometer samples the filter gated out.

    Configuration defaults come from the dataset header, so a dataset
    replays the same way everywhere: the filter tuning is the one the
    scenario recorded, and the solver's azimuth allowance widens to one
    image column because recorded detections went through the pixel
    grid.
    """
    sc = scenario_from_header(header)
    mount = sc.mount.to_pose()
    ekf = AttitudeEkf(ekf_cfg or sc.ekf)
    if solver_cfg is None:
        solver_cfg = SolverConfig(
            azimuth_tol=max(1e-6, sc.sonar.azimuth_bin)
        )

    counts: dict = {"detections": 0, "solved": 0, "imu_rejected": 0}
    fix: PlanarFix | None = None
    depth_z: float | None = None
    last_imu_t: float | None = None

    est_t: list[float] = []
    est_p: list[np.ndarray] = []
    truth_t: list[float] = []
    truth_p: list[list[float]] = []

    for rec in records:
        t, rtype, pl = rec["t"], rec["type"], rec["payload"]
        if rtype == "imu":
            if last_imu_t is not None:
                ekf.predict(np.array([pl["wx"], pl["wy"], pl["wz"]]), t - last_imu_t)
            last_imu_t = t
            try:
                ekf.update(np.array([pl["ax"], pl["ay"], pl["az"]]))
            except MeasurementRejected:
                counts["imu_rejected"] += 1
        elif rtype == "slam":
            fix = PlanarFix(x=pl["x"], y=pl["y"], yaw=pl["yaw"])
        elif rtype == "depth":
            depth_z = pl["z"]
        elif rtype == "detection":
            counts["detections"] += 1
            if fix is None or depth_z is None:
                counts["no_context"] = counts.get("no_context", 0) + 1
                continue
            asv_pose = fuse_asv_pose(fix, sc.asv.z, ekf)
            azimuth, slant_range = pixel_to_polar(pl["u"], pl["v"], sc.sonar)
            try:
                fix3d = solve_position(
                    asv_pose, mount, azimuth, slant_range, depth_z,
                    sc.sonar, solver_cfg,
                )
            except SolverError as err:
                counts[err.code] = counts.get(err.code, 0) + 1
                continue
            counts["solved"] += 1
            est_t.append(t)
            est_p.append(fix3d.position)
        elif rtype == "gt_rov":
            truth_t.append(t)
            truth_p.append([pl["x"], pl["y"], pl["z"]])

    return PipelineResult(
        times=np.array(est_t),
        positions=np.array(est_p).reshape(-1, 3),
        truth_times=np.array(truth_t),
        truth_positions=np.array(truth_p).reshape(-1, 3),
        counts=counts,
    )


def run_pipeline(
    header: dict,
    records: list[dict],
    ekf_cfg: EkfConfig | None = None,
    solver_cfg: SolverConfig | None = None,
    clamp_window: float = 0.05,
) -> tuple[PipelineResult, dict]:
    """Replay a dataset and score it in one call.

    Returns the replay result plus the metrics dict with the replay's
    error-code tallies merged in under "counts".  Without ground truth
    in the dataset (or with nothing pairing) the metrics carry the
    "empty_overlap" tag rather than raising.
    """
    result = replay(header, records, ekf_cfg=ekf_cfg, solver_cfg=solver_cfg)
    metrics = compute_metrics(
        result.times,
        result.positions,
        result.truth_times,
        result.truth_positions,
        clamp_window=clamp_window,
    )
    metrics["counts"] = dict(result.counts)
    return result, metrics
