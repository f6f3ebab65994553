"""Closed-form 3D target positioning from one sonar return plus depth.

A single range-azimuth detection constrains the target to the
intersection of two surfaces anchored at the sonar head: a sphere of
radius equal to the measured slant range, and the vertical fan plane of
the beam that saw it (the sonar collapses elevation, so the return only
says which fan the target is in).  The target's own depth sensor
supplies the third surface, the horizontal plane z = depth.  Three
surfaces in three unknowns give a closed-form solution.

Worked in world coordinates: slicing the range sphere at the reported
depth leaves a horizontal circle; slicing the fan plane at that depth
leaves a line; the target is where line meets circle.  Up to two
mathematical solutions exist, and the sonar's field of view plus the
sign of the beam azimuth decide which (if either) is physically the one
the sonar saw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose3, compose, wrap_angle
from .sonar import SonarConfig, beam_plane_normal, in_fov


class SolverError(RuntimeError):
    """Base for all positioning failures; .code is a stable identifier.

    candidates carries whatever geometric intersection points were
    constructed before the failure, so callers can inspect what the
    view filter saw.  Empty when the failure happened earlier.
    """

    code = "solver_error"

    def __init__(self, message: str, candidates: tuple = ()) -> None:
        super().__init__(message)
        self.candidates = candidates


class NoIntersection(SolverError):
    """Range sphere, fan plane and depth plane share no common point."""

    code = "no_intersection"


class DegeneratePlane(SolverError):
    """Fan plane is horizontal at the target depth; the slice is not a line."""

    code = "degenerate_plane"


class NoValidCandidate(SolverError):
    """Geometric solutions exist but none lies inside the sonar's view."""

    code = "no_valid_candidate"


class AmbiguousSolution(SolverError):
    """Both geometric solutions are consistent with the detection."""

    code = "ambiguous_solution"


@dataclass(frozen=True)
class SolverConfig:
    """Numerical tolerances for the closed-form intersection.

    eps_rel classifies exact geometry: the beam line is called a miss
    when its distance to the circle centre exceeds the circle radius by
    more than this relative amount, and a graze (single touching point)
    when it comes within the same sliver of the radius.  On noisy data
    the range and depth measurements rarely agree exactly, so a miss by
    at most consistency_tol metres is clamped onto tangency instead of
    failing; set it to zero for strict classification.  azimuth_tol is
    the allowance when checking that a candidate reprojects to the
    measured beam azimuth; candidates lie on the fan plane by
    construction, so a tiny value covers rounding, and a pixel-bin
    width is appropriate when azimuths were quantized by an image.
    """

    eps_rel: float = 1e-9
    consistency_tol: float = 0.05
    azimuth_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.eps_rel <= 0.0:
            raise ValueError("eps_rel must be strictly positive")
        if self.consistency_tol < 0.0:
            raise ValueError("consistency_tol must be non-negative")
        if self.azimuth_tol <= 0.0:
            raise ValueError("azimuth_tol must be strictly positive")


@dataclass(frozen=True)
class PositionFix:
    """Solved world position plus self-consistency diagnostics.

    candidates holds every geometric intersection point that was
    constructed (one when the beam line grazes the depth circle, two
    otherwise) and chosen_index says which of them survived the view
    filter.  Residuals measure how far the accepted point is from each
    of the three constraint surfaces: rounding-level for clean inputs,
    up to the consistency tolerance when a near-miss was clamped, and
    exactly zero for depth because the depth plane is honoured by
    construction.
    """

    position: np.ndarray
    sphere_residual: float
    plane_residual: float
    depth_residual: float
    candidates: tuple
    chosen_index: int


def sonar_pose_world(asv_pose: Pose3, mount: Pose3) -> Pose3:
    """Sonar frame expressed in world coordinates: vehicle pose chained with the mount."""
    return compose(asv_pose, mount)


def cutting_plane(sonar_pose: Pose3, azimuth: float) -> tuple[np.ndarray, np.ndarray]:
    """World-frame fan plane of the beam at the given azimuth.

    Returns (unit normal, anchor point); the plane passes through the
    sonar head, so the anchor is the sonar position.  Only the rotation
    part of the pose touches the normal.
    """
    normal = sonar_pose.rot @ beam_plane_normal(azimuth)
    normal = normal / np.linalg.norm(normal)
    return normal, sonar_pose.trans.copy()


def solve_position(
    asv_pose: Pose3,
    mount: Pose3,
    azimuth: float,
    slant_range: float,
    target_depth: float,
    sonar_cfg: SonarConfig,
    cfg: SolverConfig | None = None,
) -> PositionFix:
    """Locate the target in world coordinates from one detection.

    asv_pose is the vehicle body in the world frame, mount the sonar in
    the body frame.  azimuth and slant_range come off the sonar image;
    target_depth is the target's z coordinate reported by its own depth
    sensor (negative underwater).

    Raises a SolverError subclass when the measurements admit no unique
    target: NoIntersection or DegeneratePlane when the geometry is
    empty or ill-posed, NoValidCandidate or AmbiguousSolution when the
    field-of-view filter keeps zero or both intersection points.
    """
    cfg = cfg or SolverConfig()
    if not math.isfinite(slant_range) or slant_range <= 0.0:
        raise ValueError(f"slant range must be positive and finite, got {slant_range}")

    sonar_pose = sonar_pose_world(asv_pose, mount)
    sx, sy, sz = (float(c) for c in sonar_pose.trans)

    # Slice the range sphere at the target depth: a horizontal circle
    # centred above/below the sonar head.
    h = target_depth - sz
    if abs(h) > slant_range:
        raise NoIntersection(
            f"depth offset {abs(h):.4f} m exceeds slant range {slant_range:.4f} m"
        )
    circle_radius = math.sqrt(max(slant_range * slant_range - h * h, 0.0))

    # Slice the fan plane at the same depth: a line in that horizontal
    # plane, written as a*dx + b*dy = rhs about the circle centre.
    normal, _ = cutting_plane(sonar_pose, azimuth)
    a, b, c = (float(v) for v in normal)
    planar = math.hypot(a, b)
    if planar < cfg.eps_rel:
        raise DegeneratePlane(
            "fan plane is horizontal; a depth slice cannot pin the target"
        )
    rhs = -c * h
    dist = abs(rhs) / planar
    foot = np.array([a, b]) * rhs / (planar * planar)
    if dist > circle_radius * (1.0 + cfg.eps_rel):
        if dist - circle_radius > cfg.consistency_tol:
            raise NoIntersection(
                f"beam line misses the depth circle by {dist - circle_radius:.4f} m"
            )
        # Noisy measurements that barely miss: pull the line's closest
        # point onto the circle and treat the contact as tangency.
        foot = foot * (circle_radius / dist)
        dist = circle_radius

    along = np.array([-b, a]) / planar
    if circle_radius - dist <= cfg.eps_rel * max(1.0, circle_radius):
        planar_candidates = [foot]
    else:
        offset = math.sqrt(circle_radius * circle_radius - dist * dist)
        planar_candidates = [foot + offset * along, foot - offset * along]
    candidates = tuple(
        np.array([sx + dx, sy + dy, target_depth]) for dx, dy in planar_candidates
    )

    # The sonar saw the target, so the solution must sit inside the
    # acoustic fan and reproject to the measured beam azimuth.
    survivors = []
    reasons = []
    for index, point in enumerate(candidates):
        local = sonar_pose.rot.T @ (point - sonar_pose.trans)
        visible, reason = in_fov(local, sonar_cfg)
        if not visible:
            reasons.append(reason)
            continue
        if abs(wrap_angle(math.atan2(local[1], local[0]) - azimuth)) > cfg.azimuth_tol:
            reasons.append("azimuth_mismatch")
            continue
        survivors.append(index)
    if not survivors:
        raise NoValidCandidate(
            f"all {len(candidates)} intersection point(s) rejected: {reasons}",
            candidates=candidates,
        )
    if len(survivors) > 1:
        raise AmbiguousSolution(
            "both intersection points lie inside the sonar's view; "
            "the detection does not single out a target",
            candidates=candidates,
        )

    chosen = survivors[0]
    position = candidates[chosen]
    delta = position - sonar_pose.trans
    return PositionFix(
        position=position,
        sphere_residual=abs(float(np.linalg.norm(delta)) - slant_range),
        plane_residual=abs(float(normal @ delta)),
        depth_residual=abs(float(position[2]) - target_depth),
        candidates=candidates,
        chosen_index=chosen,
    )


def brute_force_solve(
    asv_pose: Pose3,
    mount: Pose3,
    azimuth: float,
    slant_range: float,
    target_depth: float,
    n_samples: int = 4096,
) -> list[np.ndarray]:
    """Sampling oracle for the closed-form solver; returns raw roots.

    Walks the circle where the range sphere meets the fan plane using an
    explicit orthonormal basis, finds every sign change of z against the
    target depth, and sharpens each crossing by bisection.  No field-of-
    view filtering is applied, so the list holds zero, one or two world
    points; empty means the three surfaces share no common point.
    """
    if n_samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {n_samples}")
    if not math.isfinite(slant_range) or slant_range <= 0.0:
        raise ValueError(f"slant range must be positive and finite, got {slant_range}")

    sonar_pose = compose(asv_pose, mount)
    center = sonar_pose.trans
    normal = sonar_pose.rot @ np.array([math.sin(azimuth), -math.cos(azimuth), 0.0])
    normal = normal / np.linalg.norm(normal)

    # Any two unit vectors spanning the fan plane will do as a basis.
    seed_axis = np.array([0.0, 0.0, 1.0])
    u_axis = np.cross(normal, seed_axis)
    if np.linalg.norm(u_axis) < 1e-12:
        u_axis = np.cross(normal, np.array([1.0, 0.0, 0.0]))
    u_axis = u_axis / np.linalg.norm(u_axis)
    v_axis = np.cross(normal, u_axis)

    def point_at(angle: float) -> np.ndarray:
        return center + slant_range * (
            math.cos(angle) * u_axis + math.sin(angle) * v_axis
        )

    def height(angle: float) -> float:
        return float(point_at(angle)[2]) - target_depth

    # z around the circle is a pure sinusoid; a flat one never crosses.
    amplitude = slant_range * math.hypot(float(u_axis[2]), float(v_axis[2]))
    if amplitude < 1e-15:
        return []

    step = 2.0 * math.pi / n_samples
    angles = [i * step for i in range(n_samples)]
    values = [height(t) for t in angles]
    roots: list[float] = []
    for i in range(n_samples):
        t0, f0 = angles[i], values[i]
        t1 = angles[(i + 1) % n_samples] if i + 1 < n_samples else 2.0 * math.pi
        f1 = values[(i + 1) % n_samples]
        if f0 == 0.0:
            roots.append(t0)
            continue
        if f0 * f1 >= 0.0:
            continue
        lo, hi, flo = t0, t1, f0
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            fmid = height(mid)
            if fmid == 0.0:
                lo = hi = mid
                break
            if flo * fmid < 0.0:
                hi = mid
            else:
                lo, flo = mid, fmid
        roots.append(0.5 * (lo + hi))

    points: list[np.ndarray] = []
    for t in roots:
        candidate = point_at(t)
        if all(
            np.linalg.norm(candidate - q) > 1e-8 * max(1.0, slant_range)
            for q in points
        ):
            points.append(candidate)
    return points
