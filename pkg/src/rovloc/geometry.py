"""Rigid-body frame algebra shared by the whole positioning stack.

Conventions, fixed once here and relied on everywhere else:

* The world frame is z-up with its origin at a tank corner; underwater
  depths are negative z.
* Rotations are stored as 3x3 matrices.  Euler angles appear only when
  constructing or reporting a rotation, and follow the Z-Y-X convention:
  yaw about z, then pitch about y, then roll about x.
* Angles are radians.  Degrees exist only at CLI/file boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ROT_TOL = 1e-9
GIMBAL_GUARD = 1e-9


class GimbalLockError(ValueError):
    """Euler extraction attempted with |pitch| at 90 degrees."""

    code = "gimbal_lock"


def rot_x(angle: float) -> np.ndarray:
    """Rotation about the x axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    """Rotation about the y axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    """Rotation about the z axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def is_rotation(r: np.ndarray, tol: float = ROT_TOL) -> bool:
    """True if r is orthonormal with determinant +1 within tol."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    if not np.all(np.isfinite(r)):
        return False
    if np.max(np.abs(r.T @ r - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(r) - 1.0) <= tol


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(angle + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


@dataclass(frozen=True)
class EulerZYX:
    """Z-Y-X Euler angles in radians; |pitch| must stay below 90 deg."""

    yaw: float
    pitch: float
    roll: float


@dataclass(frozen=True)
class Pose3:
    """SE(3) transform: rotation matrix plus translation vector.

    A pose H_B^A maps coordinates in frame B to frame A via
    p_A = rot @ p_B + trans.
    """

    rot: np.ndarray = field(default_factory=lambda: np.eye(3))
    trans: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        object.__setattr__(self, "rot", np.asarray(self.rot, dtype=float))
        object.__setattr__(self, "trans", np.asarray(self.trans, dtype=float))
        if self.rot.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {self.rot.shape}")
        if self.trans.shape != (3,):
            raise ValueError(f"translation must be a 3-vector, got {self.trans.shape}")

    @staticmethod
    def identity() -> "Pose3":
        return Pose3(np.eye(3), np.zeros(3))

    @staticmethod
    def from_euler(e: EulerZYX, trans=(0.0, 0.0, 0.0)) -> "Pose3":
        return Pose3(euler_zyx_to_rot(e), np.asarray(trans, dtype=float))


def euler_zyx_to_rot(e: EulerZYX) -> np.ndarray:
    """Rotation matrix Rz(yaw) Ry(pitch) Rx(roll), written out directly."""
    cy, sy = math.cos(e.yaw), math.sin(e.yaw)
    cp, sp = math.cos(e.pitch), math.sin(e.pitch)
    cr, sr = math.cos(e.roll), math.sin(e.roll)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


def rot_to_euler_zyx(r: np.ndarray) -> EulerZYX:
    """Recover Z-Y-X Euler angles from a rotation matrix.

    Raises GimbalLockError when |pitch| reaches 90 degrees, where yaw and
    roll become indistinguishable.
    """
    r = np.asarray(r, dtype=float)
    sp = -r[2, 0]
    if abs(sp) >= 1.0 - GIMBAL_GUARD:
        raise GimbalLockError(f"pitch at +/-90 deg (sin(pitch) = {sp!r})")
    pitch = math.asin(sp)
    roll = math.atan2(r[2, 1], r[2, 2])
    yaw = math.atan2(r[1, 0], r[0, 0])
    return EulerZYX(yaw=yaw, pitch=pitch, roll=roll)


def compose(a: Pose3, b: Pose3) -> Pose3:
    """Chain two transforms: (a * b) maps through b first, then a."""
    return Pose3(a.rot @ b.rot, a.rot @ b.trans + a.trans)


def invert(p: Pose3) -> Pose3:
    """Inverse transform; compose(p, invert(p)) is the identity."""
    rt = p.rot.T
    return Pose3(rt, -(rt @ p.trans))


def transform_point(p: Pose3, v: np.ndarray) -> np.ndarray:
    """Map a point through the transform (rotation plus translation)."""
    return p.rot @ np.asarray(v, dtype=float) + p.trans


def transform_direction(p: Pose3, v: np.ndarray) -> np.ndarray:
    """Map a direction through the transform (rotation only)."""
    return p.rot @ np.asarray(v, dtype=float)
