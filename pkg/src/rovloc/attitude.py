"""Roll/pitch estimation for the surface vehicle.

The planar SLAM solution on the vehicle gives x, y and yaw but says
nothing about how the hull is tilting, and the sonar ray geometry is
sensitive to exactly that.  A small extended Kalman filter tracks roll
and pitch from the IMU: gyro rates drive the prediction, and the
accelerometer supplies a gravity reference whenever the vehicle is not
accelerating hard.  Yaw is taken verbatim from SLAM; the filter never
estimates it.

State is (roll, pitch) in radians.  The body rates map to Euler angle
rates through the usual kinematic relation

    roll_dot  = wx + wy sin(roll) tan(pitch) + wz cos(roll) tan(pitch)
    pitch_dot = wy cos(roll) - wz sin(roll)

valid away from |pitch| = 90 deg, which the filter treats as a
divergence and refuses to cross.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose3, rot_x, rot_y, rot_z

GRAVITY = 9.80665
PITCH_LIMIT = math.pi / 2.0 - 1e-3


class MeasurementRejected(RuntimeError):
    """Accelerometer sample gated out (magnitude too far from gravity)."""

    code = "accel_gated"


class NumericalDivergence(RuntimeError):
    """Filter state left its validity region (pitch near +/-90 deg)."""

    code = "ekf_diverged"


@dataclass(frozen=True)
class EkfConfig:
    """Tuning knobs for the roll/pitch filter.

    gyro_noise_density is the white-noise density of the rate input in
    rad/s/sqrt(Hz); for a gyro with per-sample standard deviation
    sigma at sample rate f it equals sigma/sqrt(f).  accel_noise is the
    per-axis accelerometer standard deviation in m/s^2.  Both must be
    positive even for noise-free runs so the covariance stays
    well-conditioned.

    accel_sign fixes the accelerometer convention: +1 when a level
    static unit reads (0, 0, +g), -1 for units that report the gravity
    vector itself rather than the specific force opposing it.
    """

    gyro_noise_density: float = 1e-3
    accel_noise: float = 0.05
    init_std: float = 0.1
    gravity: float = GRAVITY
    accel_gate: float = 0.3
    max_dt: float = 0.1
    accel_sign: int = 1

    def __post_init__(self) -> None:
        if self.gyro_noise_density <= 0.0 or self.accel_noise <= 0.0:
            raise ValueError("noise parameters must be strictly positive")
        if self.init_std <= 0.0 or self.gravity <= 0.0:
            raise ValueError("init_std and gravity must be strictly positive")
        if not 0.0 < self.accel_gate:
            raise ValueError("accel_gate must be strictly positive")
        if self.max_dt <= 0.0:
            raise ValueError("max_dt must be strictly positive")
        if self.accel_sign not in (-1, 1):
            raise ValueError("accel_sign must be +1 or -1")


@dataclass(frozen=True)
class PlanarFix:
    """Planar pose from the vehicle's SLAM stack: x, y in metres, yaw in radians."""

    x: float
    y: float
    yaw: float


class AttitudeEkf:
    """EKF over (roll, pitch) driven by gyro rates, corrected by gravity."""

    def __init__(self, config: EkfConfig | None = None,
                 roll: float = 0.0, pitch: float = 0.0) -> None:
        self.config = config or EkfConfig()
        self.state = np.array([roll, pitch], dtype=float)
        self.cov = np.eye(2) * self.config.init_std ** 2
        self._check_valid()

    @property
    def roll(self) -> float:
        return float(self.state[0])

    @property
    def pitch(self) -> float:
        return float(self.state[1])

    def _check_valid(self) -> None:
        if not np.all(np.isfinite(self.state)) or not np.all(np.isfinite(self.cov)):
            raise NumericalDivergence("non-finite filter state")
        if abs(self.state[1]) >= PITCH_LIMIT:
            raise NumericalDivergence(
                f"pitch {self.state[1]:.4f} rad reached the +/-90 deg singularity"
            )

    def predict(self, gyro: np.ndarray, dt: float) -> None:
        """Propagate the state through one gyro interval.

        gyro is the body rate vector (wx, wy, wz) in rad/s.  Intervals
        longer than config.max_dt are integrated in equal substeps so a
        data gap does not take one giant Euler step.
        """
        if dt < 0.0:
            raise ValueError(f"dt must be non-negative, got {dt}")
        if dt == 0.0:
            return
        wx, wy, wz = (float(v) for v in gyro)
        n = max(1, math.ceil(dt / self.config.max_dt))
        h = dt / n
        q = self.config.gyro_noise_density ** 2
        for _ in range(n):
            roll, pitch = self.state
            sr, cr = math.sin(roll), math.cos(roll)
            tp = math.tan(pitch)
            roll_dot = wx + wy * sr * tp + wz * cr * tp
            pitch_dot = wy * cr - wz * sr
            # Jacobian of the rate equations wrt (roll, pitch)
            sec2 = 1.0 + tp * tp
            f = np.array(
                [
                    [(wy * cr - wz * sr) * tp, (wy * sr + wz * cr) * sec2],
                    [-wy * sr - wz * cr, 0.0],
                ]
            )
            phi = np.eye(2) + f * h
            self.state = self.state + h * np.array([roll_dot, pitch_dot])
            self.cov = phi @ self.cov @ phi.T + h * q * np.eye(2)
            self._check_valid()

    def update(self, accel: np.ndarray) -> None:
        """Correct roll and pitch against the gravity direction.

        accel is the specific-force reading in m/s^2; with the default
        sign convention a level static vehicle reads (0, 0, +g), and
        config.accel_sign = -1 flips the interpretation.  Samples whose
        magnitude differs from gravity by more than accel_gate * g are
        rejected, because the gravity-direction assumption does not
        hold while the vehicle accelerates.
        """
        a = self.config.accel_sign * np.asarray(accel, dtype=float)
        g = self.config.gravity
        norm = float(np.linalg.norm(a))
        if abs(norm - g) > self.config.accel_gate * g:
            raise MeasurementRejected(
                f"|accel| = {norm:.3f} m/s^2 outside gate around g = {g:.3f}"
            )
        roll, pitch = self.state
        sr, cr = math.sin(roll), math.cos(roll)
        sp, cp = math.sin(pitch), math.cos(pitch)
        predicted = g * np.array([-sp, sr * cp, cr * cp])
        jac = g * np.array(
            [
                [0.0, -cp],
                [cr * cp, -sr * sp],
                [-sr * cp, -cr * sp],
            ]
        )
        r = self.config.accel_noise ** 2 * np.eye(3)
        s = jac @ self.cov @ jac.T + r
        gain = self.cov @ jac.T @ np.linalg.inv(s)
        self.state = self.state + gain @ (a - predicted)
        ikh = np.eye(2) - gain @ jac
        self.cov = ikh @ self.cov @ ikh.T + gain @ r @ gain.T
        self._check_valid()


def fuse_asv_pose(fix: PlanarFix, depth_z: float, ekf: AttitudeEkf) -> Pose3:
    """Assemble the full vehicle pose from its three partial sources.

    Planar position and yaw come from SLAM, roll and pitch from the
    filter, and the vertical coordinate from the vehicle's own depth
    (zero for a hull floating at the surface).
    """
    rot = rot_z(fix.yaw) @ rot_y(ekf.pitch) @ rot_x(ekf.roll)
    return Pose3(rot, np.array([fix.x, fix.y, depth_z], dtype=float))
