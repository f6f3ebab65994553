"""Independent reference implementations used to check the package.

Nothing here shares algorithm code with the package under test: the
intersection oracle walks the beam-fan circle numerically and root-finds
the depth crossing by bisection, and the attitude oracle integrates the
tilt kinematics with brute-force small steps.
"""

from __future__ import annotations

import math

import numpy as np


def fan_circle_basis(rot: np.ndarray, azimuth: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """World-frame normal and in-plane basis of the beam fan plane."""
    normal = rot @ np.array([math.sin(azimuth), -math.cos(azimuth), 0.0])
    normal = normal / np.linalg.norm(normal)
    helper = np.array([0.0, 0.0, 1.0])
    if abs(normal[2]) > 0.9:
        helper = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(normal, helper)
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return normal, e1, e2


def depth_crossings(
    sonar_rot: np.ndarray,
    sonar_pos: np.ndarray,
    azimuth: float,
    slant_range: float,
    target_depth: float,
    samples: int = 4096,
    iterations: int = 80,
) -> list[np.ndarray]:
    """All points at the target depth on the fan-plane circle of the
    measured range, found by sampling and bisection."""
    _, e1, e2 = fan_circle_basis(sonar_rot, azimuth)

    def point(t: float) -> np.ndarray:
        return sonar_pos + slant_range * (math.cos(t) * e1 + math.sin(t) * e2)

    def f(t: float) -> float:
        return point(t)[2] - target_depth

    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    zs = sonar_pos[2] + slant_range * (np.cos(ts) * e1[2] + np.sin(ts) * e2[2])
    vals = zs - target_depth

    roots: list[float] = []
    for i in range(samples):
        j = (i + 1) % samples
        a, b = vals[i], vals[j]
        ta = ts[i]
        tb = ts[j] if j != 0 else 2.0 * math.pi
        if a == 0.0:
            roots.append(ta)
            continue
        if a * b < 0.0:
            lo, hi, flo = ta, tb, a
            for _ in range(iterations):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))

    points = [point(t) for t in roots]
    deduped: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > 1e-6 * max(1.0, slant_range) for q in deduped):
            deduped.append(p)
    return deduped


def visible_from(
    sonar_rot: np.ndarray,
    sonar_pos: np.ndarray,
    point: np.ndarray,
    azimuth: float,
    hfov: float,
    vfov_min: float,
    vfov_max: float,
    max_range: float,
    azimuth_tol: float = 1e-6,
) -> bool:
    """Field-of-view plus beam-azimuth filter, written out independently."""
    q = sonar_rot.T @ (np.asarray(point) - np.asarray(sonar_pos))
    if q[0] <= 0.0:
        return False
    az = math.atan2(q[1], q[0])
    if abs(az) > hfov / 2.0:
        return False
    el = math.atan2(q[2], math.hypot(q[0], q[1]))
    if not vfov_min <= el <= vfov_max:
        return False
    if np.linalg.norm(q) > max_range:
        return False
    diff = math.fmod(az - azimuth + math.pi, 2.0 * math.pi)
    if diff <= 0.0:
        diff += 2.0 * math.pi
    return abs(diff - math.pi) <= azimuth_tol


def classify(
    sonar_rot: np.ndarray,
    sonar_pos: np.ndarray,
    azimuth: float,
    slant_range: float,
    target_depth: float,
    hfov: float,
    vfov_min: float,
    vfov_max: float,
    max_range: float,
) -> tuple[str, np.ndarray | None]:
    """Classify a measurement the way the closed-form solver should.

    Returns one of ("position", point), ("no_intersection", None),
    ("no_valid_candidate", None), ("ambiguous_solution", None).
    """
    points = depth_crossings(sonar_rot, sonar_pos, azimuth, slant_range, target_depth)
    if not points:
        return "no_intersection", None
    survivors = [
        p
        for p in points
        if visible_from(
            sonar_rot, sonar_pos, p, azimuth, hfov, vfov_min, vfov_max, max_range
        )
    ]
    if not survivors:
        return "no_valid_candidate", None
    if len(survivors) > 1:
        return "ambiguous_solution", None
    return "position", survivors[0]


def boundary_margin(
    sonar_rot: np.ndarray,
    sonar_pos: np.ndarray,
    azimuth: float,
    slant_range: float,
    target_depth: float,
    hfov: float,
    vfov_min: float,
    vfov_max: float,
    max_range: float,
) -> float:
    """Distance of a measurement from every classification boundary.

    Randomized comparisons resample inputs whose margin is tiny, because
    on a knife edge two correct implementations may legitimately round
    to different classes.  Covers tangency of the depth plane with the
    fan circle, and each field-of-view limit for every crossing point.
    """
    _, e1, e2 = fan_circle_basis(sonar_rot, azimuth)
    amp = slant_range * math.hypot(e1[2], e2[2])
    offset = abs(target_depth - sonar_pos[2])
    margin = abs(amp - offset)

    for p in depth_crossings(sonar_rot, sonar_pos, azimuth, slant_range, target_depth):
        q = sonar_rot.T @ (p - sonar_pos)
        az = math.atan2(q[1], q[0])
        el = math.atan2(q[2], math.hypot(q[0], q[1]))
        margin = min(
            margin,
            abs(q[0]),
            abs(hfov / 2.0 - abs(az)),
            abs(el - vfov_min),
            abs(vfov_max - el),
            abs(max_range - float(np.linalg.norm(q))),
        )
    return margin


def integrate_tilt(
    times: np.ndarray, gyros: np.ndarray, roll0: float, pitch0: float, substeps: int = 100
) -> np.ndarray:
    """Reference roll/pitch by fine Euler integration of the tilt
    kinematics, holding each gyro sample over its interval."""
    out = np.zeros((len(times), 2))
    roll, pitch = roll0, pitch0
    out[0] = roll0, pitch0
    for i in range(1, len(times)):
        h = (times[i] - times[i - 1]) / substeps
        wx, wy, wz = gyros[i - 1]
        for _ in range(substeps):
            sr, cr = math.sin(roll), math.cos(roll)
            tp = math.tan(pitch)
            roll += h * (wx + wy * sr * tp + wz * cr * tp)
            pitch += h * (wy * cr - wz * sr)
        out[i] = roll, pitch
    return out
