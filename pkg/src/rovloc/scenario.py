"""Deterministic scenario simulator for tank-scale positioning runs.

A scenario is a tank, a target trajectory, a surface-vehicle track, a
sonar mount, and sensor rate/noise settings.  simulate() turns one into
a time-ordered record list (see dataset.py): ground truth for both
vehicles, the surface vehicle's IMU and planar SLAM streams, the
target's depth stream, and sonar detections in pixel coordinates.

Everything is driven by a single seeded generator, and noise values are
always drawn then scaled by their sigma, so two runs that differ only
in noise magnitudes see the same underlying random sequence.  Whether a
detection happens at all depends only on true geometry (field of view)
and the dropout draw, never on the noise values, so sweeps over noise
magnitude compare like with like.

Units: metres, seconds, radians internally.  Degrees appear only in the
scenario TOML files, on keys suffixed _deg.  The world frame is z-up
with the origin at a tank corner; the water column spans
-tank.depth < z < 0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .attitude import GRAVITY, EkfConfig
from .dataset import record, sort_key
from .geometry import EulerZYX, Pose3, compose, euler_zyx_to_rot
from .sonar import SonarConfig, in_fov, point_to_polar, polar_to_pixel

TRAJECTORY_KINDS = ("square", "lawnmower", "bouncing", "random", "two_floor")
ASV_MODES = ("stationary", "hover")

# Noisy pixels are clamped this far inside the image bounds so a clamped
# detection still reprojects strictly inside the field of view.
PIXEL_GUARD = 1e-12


class InfeasibleScenario(ValueError):
    """Scenario parameters cannot produce the requested run."""

    code = "infeasible_scenario"


@dataclass(frozen=True)
class TankConfig:
    """Rectangular tank; water occupies [0, length] x [0, width] x [-depth, 0]."""

    length: float = 28.0
    width: float = 16.0
    depth: float = 8.0


@dataclass(frozen=True)
class TrajectoryConfig:
    """Target motion plan.

    kind selects the pattern; speed is the constant 3D speed in m/s;
    margin keeps the path away from the walls.  depth is the working
    z (negative underwater); depth2 is the second floor for two_floor
    and the other z bound for random.  duration of None means one full
    traversal of the pattern.  amplitude/period shape the bouncing
    vertical oscillation, lane_spacing the mowing patterns, and
    waypoint_count/seed the random walk.
    """

    kind: str = "square"
    speed: float = 0.5
    margin: float = 4.0
    depth: float = -2.0
    depth2: float = -3.0
    duration: float | None = None
    lane_spacing: float = 4.0
    amplitude: float = 0.75
    period: float = 30.0
    waypoint_count: int = 8
    seed: int = 0


@dataclass(frozen=True)
class AsvConfig:
    """Surface-vehicle track.

    stationary holds the given pose exactly.  hover shadows the target:
    the planar position chases the target's x, y through a first-order
    lag (63.2 percent of a step covered after lag seconds; zero means
    instant), starting directly above it, while roll and pitch rock as
    sinusoids of the given amplitudes and common period, pitch offset
    by rock_phase.  x and y place the vehicle in stationary mode only.
    """

    mode: str = "stationary"
    x: float = 0.5
    y: float = 8.0
    z: float = 0.0
    yaw: float = 0.0
    lag: float = 3.0
    roll_amp: float = 0.0
    pitch_amp: float = 0.0
    rock_period: float = 8.0
    rock_phase: float = math.pi / 2.0


@dataclass(frozen=True)
class MountConfig:
    """Sonar pose on the vehicle body: translation plus Z-Y-X Euler angles."""

    x: float = 0.3
    y: float = 0.0
    z: float = -0.2
    yaw: float = 0.0
    pitch: float = 0.0
    roll: float = 0.0

    def to_pose(self) -> Pose3:
        rot = euler_zyx_to_rot(EulerZYX(yaw=self.yaw, pitch=self.pitch, roll=self.roll))
        return Pose3(rot, np.array([self.x, self.y, self.z]))


@dataclass(frozen=True)
class SensorConfig:
    """Sample rates (Hz) and one-sigma noise levels for every stream.

    sigma_px applies independently to both pixel axes of a detection;
    sigma_azimuth (rad) and sigma_range (m) perturb the beam angle and
    slant range before the pixel mapping.  dropout is the probability
    that a geometrically visible detection is discarded anyway, and a
    surviving detection is additionally smeared by outlier_px (same
    two-axis convention as sigma_px) with probability outlier_rate,
    mimicking a detector briefly latching onto the wrong part of the
    target.
    """

    seed: int = 0
    gt_rate: float = 10.0
    imu_rate: float = 100.0
    slam_rate: float = 10.0
    depth_rate: float = 20.0
    detection_rate: float = 10.0
    sigma_gyro: float = 0.0
    sigma_accel: float = 0.0
    sigma_slam_xy: float = 0.0
    sigma_slam_yaw: float = 0.0
    sigma_depth: float = 0.0
    sigma_px: float = 0.0
    sigma_azimuth: float = 0.0
    sigma_range: float = 0.0
    dropout: float = 0.0
    outlier_px: float = 0.0
    outlier_rate: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    tank: TankConfig
    trajectory: TrajectoryConfig
    asv: AsvConfig
    mount: MountConfig
    sonar: SonarConfig
    sensors: SensorConfig
    ekf: EkfConfig = field(default_factory=EkfConfig)


def validate(sc: ScenarioConfig) -> None:
    """Reject scenarios that cannot run; raises InfeasibleScenario."""
    tank, traj, asv, sensors = sc.tank, sc.trajectory, sc.asv, sc.sensors
    if tank.length <= 0 or tank.width <= 0 or tank.depth <= 0:
        raise InfeasibleScenario("tank dimensions must be positive")
    if traj.kind not in TRAJECTORY_KINDS:
        raise InfeasibleScenario(f"unknown trajectory kind {traj.kind!r}")
    if asv.mode not in ASV_MODES:
        raise InfeasibleScenario(f"unknown vehicle mode {asv.mode!r}")
    if traj.speed <= 0:
        raise InfeasibleScenario("trajectory speed must be positive")
    if traj.margin < 0 or 2 * traj.margin >= min(tank.length, tank.width):
        raise InfeasibleScenario(
            f"margin {traj.margin} leaves no room in a "
            f"{tank.length} x {tank.width} tank"
        )
    if traj.duration is not None and traj.duration <= 0:
        raise InfeasibleScenario("duration must be positive when given")

    depths = [traj.depth]
    if traj.kind in ("two_floor", "random"):
        depths.append(traj.depth2)
    if traj.kind == "bouncing":
        if traj.amplitude < 0 or traj.period <= 0:
            raise InfeasibleScenario("bouncing needs amplitude >= 0 and period > 0")
        vertical_peak = 2.0 * math.pi * traj.amplitude / traj.period
        if vertical_peak >= traj.speed:
            raise InfeasibleScenario(
                f"vertical speed peak {vertical_peak:.3f} m/s reaches the "
                f"travel speed {traj.speed} m/s; flatten the oscillation"
            )
        depths += [traj.depth - traj.amplitude, traj.depth + traj.amplitude]
    for z in depths:
        if not -tank.depth < z < 0.0:
            raise InfeasibleScenario(
                f"target depth {z} m outside the water column "
                f"(-{tank.depth}, 0)"
            )
    if traj.kind in ("lawnmower", "two_floor"):
        if traj.lane_spacing <= 0:
            raise InfeasibleScenario("lane_spacing must be positive")
        if traj.lane_spacing > tank.width - 2 * traj.margin:
            raise InfeasibleScenario("lane_spacing exceeds the usable width")
    if traj.kind == "random" and traj.waypoint_count < 2:
        raise InfeasibleScenario("random walk needs at least 2 waypoints")

    if asv.mode == "stationary":
        if not 0.0 <= asv.x <= tank.length or not 0.0 <= asv.y <= tank.width:
            raise InfeasibleScenario("vehicle position outside the tank footprint")
    else:
        if asv.lag < 0:
            raise InfeasibleScenario("hover lag must be non-negative")
        if asv.rock_period <= 0:
            raise InfeasibleScenario("rock_period must be positive")

    for name in ("gt_rate", "imu_rate", "slam_rate", "depth_rate", "detection_rate"):
        if getattr(sensors, name) <= 0:
            raise InfeasibleScenario(f"{name} must be positive")
    for name in (
        "sigma_gyro",
        "sigma_accel",
        "sigma_slam_xy",
        "sigma_slam_yaw",
        "sigma_depth",
        "sigma_px",
        "sigma_azimuth",
        "sigma_range",
        "outlier_px",
    ):
        if getattr(sensors, name) < 0:
            raise InfeasibleScenario(f"{name} must be non-negative")
    if not 0.0 <= sensors.dropout <= 1.0:
        raise InfeasibleScenario("dropout must be in [0, 1]")
    if not 0.0 <= sensors.outlier_rate <= 1.0:
        raise InfeasibleScenario("outlier_rate must be in [0, 1]")


def _mow_points(x0: float, x1: float, y0: float, y1: float,
                spacing: float) -> list[tuple[float, float]]:
    """Boustrophedon lane corners over [x0,x1] x [y0,y1]."""
    ys = [y0]
    while ys[-1] + spacing < y1 - 1e-9:
        ys.append(ys[-1] + spacing)
    if ys[-1] < y1 - 1e-9:
        ys.append(y1)
    points = [(x0, ys[0])]
    for lane, y in enumerate(ys):
        x_end = x1 if lane % 2 == 0 else x0
        points.append((x_end, y))
        if lane + 1 < len(ys):
            points.append((x_end, ys[lane + 1]))
    return points


def build_waypoints(traj: TrajectoryConfig, tank: TankConfig) -> tuple[np.ndarray, bool]:
    """Waypoint polyline for the non-bouncing kinds; returns (points, closed)."""
    m = traj.margin
    x0, x1 = m, tank.length - m
    y0, y1 = m, tank.width - m
    z = traj.depth

    if traj.kind == "square":
        pts = [(x0, y0, z), (x1, y0, z), (x1, y1, z), (x0, y1, z), (x0, y0, z)]
        return np.array(pts, dtype=float), True
    if traj.kind == "lawnmower":
        pts = [(x, y, z) for x, y in _mow_points(x0, x1, y0, y1, traj.lane_spacing)]
        return np.array(pts, dtype=float), False
    if traj.kind == "two_floor":
        upper = _mow_points(x0, x1, y0, y1, traj.lane_spacing)
        lower = [(x, y, traj.depth2) for x, y in reversed(upper)]
        pts = [(x, y, z) for x, y in upper] + lower
        return np.array(pts, dtype=float), False
    if traj.kind == "random":
        rng = np.random.default_rng(traj.seed)
        zlo, zhi = sorted((traj.depth, traj.depth2))
        pts = np.column_stack(
            [
                rng.uniform(x0, x1, traj.waypoint_count),
                rng.uniform(y0, y1, traj.waypoint_count),
                rng.uniform(zlo, zhi, traj.waypoint_count),
            ]
        )
        return pts, False
    raise InfeasibleScenario(f"{traj.kind!r} has no waypoint form")


def _walk_polyline(
    waypoints: np.ndarray, closed: bool, speed: float, times: np.ndarray
) -> np.ndarray:
    """Positions along a polyline walked at constant speed.

    Past one traversal the path repeats: closed loops wrap around, open
    paths turn back and retrace themselves.
    """
    seg = np.diff(waypoints, axis=0)
    seglen = np.linalg.norm(seg, axis=1)
    keep = seglen > 0.0
    seg, seglen = seg[keep], seglen[keep]
    starts = waypoints[:-1][keep]
    if len(seg) == 0:
        raise InfeasibleScenario("trajectory waypoints are all coincident")
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]

    s = speed * np.asarray(times, dtype=float)
    if closed:
        s = np.mod(s, total)
    else:
        s = np.mod(s, 2.0 * total)
        s = np.where(s > total, 2.0 * total - s, s)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
    frac = (s - cum[idx]) / seglen[idx]
    return starts[idx] + seg[idx] * frac[:, None]


def _bounce_z(traj: TrajectoryConfig, t: np.ndarray) -> np.ndarray:
    return traj.depth + traj.amplitude * np.sin(2.0 * math.pi * t / traj.period)


def _bounce_march(
    traj: TrajectoryConfig,
    tank: TankConfig,
    dt: float,
    n_steps: int | None = None,
    target_distance: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """March the bouncing pattern step by step.

    The target ping-pongs along the tank centreline while its depth
    follows a sinusoid; each step spends whatever speed budget the
    vertical motion leaves on horizontal travel, so the 3D speed is
    constant.  Stops after n_steps, or once the horizontal path length
    reaches target_distance.  Returns (times, x positions).
    """
    m = traj.margin
    x0, x1 = m, tank.length - m
    step = traj.speed * dt

    xs = [x0]
    ts = [0.0]
    direction = 1.0
    covered = 0.0
    k = 0
    while True:
        if n_steps is not None and k >= n_steps:
            break
        if target_distance is not None and covered >= target_distance:
            break
        t_now, t_next = k * dt, (k + 1) * dt
        dz = float(_bounce_z(traj, np.array([t_next]))[0]
                   - _bounce_z(traj, np.array([t_now]))[0])
        horiz = math.sqrt(max(step * step - dz * dz, 0.0))
        x = xs[-1] + direction * horiz
        if x > x1:
            x = 2.0 * x1 - x
            direction = -direction
        elif x < x0:
            x = 2.0 * x0 - x
            direction = -direction
        xs.append(x)
        ts.append(t_next)
        covered += horiz
        k += 1
        if target_distance is not None and k > 10_000_000:
            raise InfeasibleScenario("bouncing trajectory failed to close")
    return np.array(ts), np.array(xs)


class RovTrack:
    """Evaluates the target trajectory at arbitrary times within a horizon."""

    def __init__(self, traj: TrajectoryConfig, tank: TankConfig,
                 gt_dt: float, horizon: float) -> None:
        self.traj = traj
        self.tank = tank
        if traj.kind == "bouncing":
            n = int(math.floor(horizon / gt_dt + 1e-9)) + 1
            self._march_t, self._march_x = _bounce_march(traj, tank, gt_dt, n_steps=n)
        else:
            self._waypoints, self._closed = build_waypoints(traj, tank)

    def positions(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        if self.traj.kind == "bouncing":
            x = np.interp(times, self._march_t, self._march_x)
            y = np.full_like(times, self.tank.width / 2.0)
            z = _bounce_z(self.traj, times)
            return np.column_stack([x, y, z])
        return _walk_polyline(self._waypoints, self._closed, self.traj.speed, times)


def traversal_time(traj: TrajectoryConfig, tank: TankConfig, gt_dt: float) -> float:
    """Duration of one full pattern traversal at the configured speed."""
    if traj.kind == "bouncing":
        span = 2.0 * (tank.length - 2.0 * traj.margin)
        ts, _ = _bounce_march(traj, tank, gt_dt, target_distance=span)
        return float(ts[-1])
    waypoints, _ = build_waypoints(traj, tank)
    length = float(np.sum(np.linalg.norm(np.diff(waypoints, axis=0), axis=1)))
    return length / traj.speed


class AsvTrack:
    """Evaluates the surface vehicle's pose and IMU truth at arbitrary times.

    hover mode chases a target track, so it needs one: the lag response
    is stepped on the target grid (target held over each step, the
    exponential decay applied exactly) and interpolated in between.
    The tilt channels (pose_at, body_rates, specific_force) never touch
    the planar follower and work without a target.
    """

    def __init__(self, cfg: AsvConfig, target=None, rate: float = 10.0,
                 horizon: float = 0.0) -> None:
        self.cfg = cfg
        self._t = None
        self._xy = None
        if cfg.mode == "hover" and target is not None:
            # Same node arithmetic as _grid, so sample times land exactly
            # on nodes; one spare node keeps every stream interior.
            n = int(math.floor(horizon * rate + 1e-9)) + 2
            t = np.arange(n, dtype=float) / rate
            goals = np.asarray(target.positions(t))[:, :2]
            decay = math.exp(-1.0 / (rate * cfg.lag)) if cfg.lag > 0.0 else 0.0
            xy = np.empty((n, 2))
            xy[0] = goals[0]
            for k in range(1, n):
                xy[k] = goals[k] + (xy[k - 1] - goals[k]) * decay
            self._t, self._xy = t, xy

    def planar_at(self, t: float) -> tuple[float, float]:
        if self.cfg.mode == "stationary":
            return self.cfg.x, self.cfg.y
        if self._xy is None:
            raise ValueError("hover mode needs a target track to follow")
        return (
            float(np.interp(t, self._t, self._xy[:, 0])),
            float(np.interp(t, self._t, self._xy[:, 1])),
        )

    def _tilt(self, t: float) -> tuple[float, float]:
        cfg = self.cfg
        if cfg.mode == "stationary":
            return 0.0, 0.0
        w = 2.0 * math.pi / cfg.rock_period
        return (
            cfg.roll_amp * math.sin(w * t),
            cfg.pitch_amp * math.sin(w * t + cfg.rock_phase),
        )

    def pose_at(self, t: float) -> EulerZYX:
        roll, pitch = self._tilt(t)
        return EulerZYX(yaw=self.cfg.yaw, pitch=pitch, roll=roll)

    def position_at(self, t: float) -> np.ndarray:
        x, y = self.planar_at(t)
        return np.array([x, y, self.cfg.z])

    def world_pose(self, t: float) -> Pose3:
        return Pose3(euler_zyx_to_rot(self.pose_at(t)), self.position_at(t))

    def body_rates(self, t: float) -> np.ndarray:
        """True gyro reading: Euler angle rates mapped into the body frame."""
        cfg = self.cfg
        if cfg.mode == "stationary":
            return np.zeros(3)
        w = 2.0 * math.pi / cfg.rock_period
        roll, pitch = self._tilt(t)
        roll_dot = cfg.roll_amp * w * math.cos(w * t)
        pitch_dot = cfg.pitch_amp * w * math.cos(w * t + cfg.rock_phase)
        yaw_dot = 0.0
        sr, cr = math.sin(roll), math.cos(roll)
        sp, cp = math.sin(pitch), math.cos(pitch)
        return np.array(
            [
                roll_dot - yaw_dot * sp,
                pitch_dot * cr + yaw_dot * cp * sr,
                -pitch_dot * sr + yaw_dot * cp * cr,
            ]
        )

    def specific_force(self, t: float) -> np.ndarray:
        """True accelerometer reading, gravity only (hover accelerations
        are small against g and are not modelled)."""
        roll, pitch = self._tilt(t)
        sr, cr = math.sin(roll), math.cos(roll)
        sp, cp = math.sin(pitch), math.cos(pitch)
        return GRAVITY * np.array([-sp, sr * cp, cr * cp])


def _grid(duration: float, rate: float) -> np.ndarray:
    n = int(math.floor(duration * rate + 1e-9)) + 1
    return np.arange(n, dtype=float) / rate


def simulate(sc: ScenarioConfig) -> tuple[dict, list[dict]]:
    """Run one scenario; returns (header, time-ordered records)."""
    validate(sc)
    sensors = sc.sensors
    gt_dt = 1.0 / sensors.gt_rate
    if sc.trajectory.duration is not None:
        duration = float(sc.trajectory.duration)
    else:
        duration = traversal_time(sc.trajectory, sc.tank, gt_dt)

    rov = RovTrack(sc.trajectory, sc.tank, gt_dt, duration)
    asv = AsvTrack(sc.asv, rov, sensors.gt_rate, duration)
    mount = sc.mount.to_pose()
    rng = np.random.default_rng(sensors.seed)
    records: list[dict] = []

    # Ground truth for both vehicles.
    t_gt = _grid(duration, sensors.gt_rate)
    rov_gt = rov.positions(t_gt)
    for t, p in zip(t_gt, rov_gt):
        e = asv.pose_at(t)
        ax, ay, az = asv.position_at(t)
        records.append(
            record(t, "gt_asv",
                   {"x": ax, "y": ay, "z": az,
                    "yaw": e.yaw, "pitch": e.pitch, "roll": e.roll})
        )
        records.append(record(t, "gt_rov", {"x": p[0], "y": p[1], "z": p[2]}))

    # IMU: true body rates and specific force plus white noise.  Noise
    # is always drawn and then scaled, keeping the random stream
    # identical across runs that differ only in sigma.
    t_imu = _grid(duration, sensors.imu_rate)
    gyro_eps = rng.standard_normal((len(t_imu), 3))
    accel_eps = rng.standard_normal((len(t_imu), 3))
    for i, t in enumerate(t_imu):
        w = asv.body_rates(t) + sensors.sigma_gyro * gyro_eps[i]
        a = asv.specific_force(t) + sensors.sigma_accel * accel_eps[i]
        records.append(
            record(t, "imu",
                   {"wx": w[0], "wy": w[1], "wz": w[2],
                    "ax": a[0], "ay": a[1], "az": a[2]})
        )

    # Planar SLAM fixes.
    t_slam = _grid(duration, sensors.slam_rate)
    slam_eps = rng.standard_normal((len(t_slam), 3))
    for i, t in enumerate(t_slam):
        x, y = asv.planar_at(t)
        records.append(
            record(t, "slam",
                   {"x": x + sensors.sigma_slam_xy * slam_eps[i, 0],
                    "y": y + sensors.sigma_slam_xy * slam_eps[i, 1],
                    "yaw": sc.asv.yaw + sensors.sigma_slam_yaw * slam_eps[i, 2]})
        )

    # Target depth stream.
    t_depth = _grid(duration, sensors.depth_rate)
    depth_eps = rng.standard_normal(len(t_depth))
    rov_at_depth = rov.positions(t_depth)
    for i, t in enumerate(t_depth):
        records.append(
            record(t, "depth",
                   {"z": rov_at_depth[i, 2] + sensors.sigma_depth * depth_eps[i]})
        )

    # Sonar detections.  Visibility is decided on true geometry, so the
    # set of detection times does not depend on any sigma; dropped and
    # visible detections consume the same number of draws.
    t_det = _grid(duration, sensors.detection_rate)
    rov_at_det = rov.positions(t_det)
    visible: list[tuple[float, float, float]] = []
    for t, p in zip(t_det, rov_at_det):
        sonar_pose = compose(asv.world_pose(t), mount)
        local = sonar_pose.rot.T @ (p - sonar_pose.trans)
        ok, _ = in_fov(local, sc.sonar)
        if not ok:
            continue
        azimuth, rng_m = point_to_polar(local)
        visible.append((t, azimuth, rng_m))

    az_eps = rng.standard_normal(len(visible))
    range_eps = rng.standard_normal(len(visible))
    px_eps = rng.standard_normal((len(visible), 2))
    drop_eps = rng.random(len(visible))
    outlier_eps = rng.random(len(visible))
    outlier_px_eps = rng.standard_normal((len(visible), 2))
    u_hi = (sc.sonar.image_width - 1) * (1.0 - PIXEL_GUARD)
    u_lo = (sc.sonar.image_width - 1) * PIXEL_GUARD
    v_hi = (sc.sonar.image_height - 1) * (1.0 - PIXEL_GUARD)
    v_lo = (sc.sonar.image_height - 1) * PIXEL_GUARD
    for i, (t, azimuth, rng_m) in enumerate(visible):
        if drop_eps[i] < sensors.dropout:
            continue
        noisy_az = azimuth + sensors.sigma_azimuth * az_eps[i]
        noisy_rng = rng_m + sensors.sigma_range * range_eps[i]
        u, v = polar_to_pixel(noisy_az, noisy_rng, sc.sonar)
        u += sensors.sigma_px * px_eps[i, 0]
        v += sensors.sigma_px * px_eps[i, 1]
        if outlier_eps[i] < sensors.outlier_rate:
            u += sensors.outlier_px * outlier_px_eps[i, 0]
            v += sensors.outlier_px * outlier_px_eps[i, 1]
        u = min(max(u, u_lo), u_hi)
        v = min(max(v, v_lo), v_hi)
        records.append(record(t, "detection", {"u": u, "v": v}))

    header = {
        "type": "header",
        "format": "rovloc-dataset-v1",
        "duration": float(duration),
        "tank": asdict(sc.tank),
        "trajectory": asdict(sc.trajectory),
        "asv": asdict(sc.asv),
        "mount": asdict(sc.mount),
        "sonar": asdict(sc.sonar),
        "sensors": asdict(sc.sensors),
        "ekf": asdict(sc.ekf),
    }
    records.sort(key=sort_key)
    return header, records


def _to_rad(section: dict, key_deg: str, default_rad: float) -> float:
    if key_deg in section:
        return math.radians(float(section[key_deg]))
    return default_rad


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a scenario from nested plain dicts (TOML layout, degrees on
    keys suffixed _deg)."""
    tank_d = dict(data.get("tank", {}))
    traj_d = dict(data.get("trajectory", {}))
    asv_d = dict(data.get("asv", {}))
    mount_d = dict(data.get("mount", {}))
    sonar_d = dict(data.get("sonar", {}))
    sens_d = dict(data.get("sensors", {}))

    tank = TankConfig(**tank_d)
    traj = TrajectoryConfig(**traj_d)
    asv = AsvConfig(
        mode=asv_d.get("mode", "stationary"),
        x=float(asv_d.get("x", 0.5)),
        y=float(asv_d.get("y", 8.0)),
        z=float(asv_d.get("z", 0.0)),
        yaw=_to_rad(asv_d, "yaw_deg", 0.0),
        lag=float(asv_d.get("lag", 3.0)),
        roll_amp=_to_rad(asv_d, "roll_amp_deg", 0.0),
        pitch_amp=_to_rad(asv_d, "pitch_amp_deg", 0.0),
        rock_period=float(asv_d.get("rock_period", 8.0)),
        rock_phase=_to_rad(asv_d, "rock_phase_deg", math.pi / 2.0),
    )
    mount = MountConfig(
        x=float(mount_d.get("x", 0.3)),
        y=float(mount_d.get("y", 0.0)),
        z=float(mount_d.get("z", -0.2)),
        yaw=_to_rad(mount_d, "yaw_deg", 0.0),
        pitch=_to_rad(mount_d, "pitch_deg", 0.0),
        roll=_to_rad(mount_d, "roll_deg", 0.0),
    )
    sonar = SonarConfig(
        hfov=_to_rad(sonar_d, "hfov_deg", math.radians(130.0)),
        vfov_min=_to_rad(sonar_d, "vfov_min_deg", math.radians(-10.0)),
        vfov_max=_to_rad(sonar_d, "vfov_max_deg", math.radians(10.0)),
        max_range=float(sonar_d.get("max_range", 10.0)),
        image_width=int(sonar_d.get("image_width", 512)),
        image_height=int(sonar_d.get("image_height", 512)),
    )
    sensors = SensorConfig(
        seed=int(sens_d.get("seed", 0)),
        gt_rate=float(sens_d.get("gt_rate", 10.0)),
        imu_rate=float(sens_d.get("imu_rate", 100.0)),
        slam_rate=float(sens_d.get("slam_rate", 10.0)),
        depth_rate=float(sens_d.get("depth_rate", 20.0)),
        detection_rate=float(sens_d.get("detection_rate", 10.0)),
        sigma_gyro=float(sens_d.get("sigma_gyro", 0.0)),
        sigma_accel=float(sens_d.get("sigma_accel", 0.0)),
        sigma_slam_xy=float(sens_d.get("sigma_slam_xy", 0.0)),
        sigma_slam_yaw=_to_rad(sens_d, "sigma_slam_yaw_deg", 0.0),
        sigma_depth=float(sens_d.get("sigma_depth", 0.0)),
        sigma_px=float(sens_d.get("sigma_px", 0.0)),
        sigma_azimuth=_to_rad(sens_d, "sigma_azimuth_deg", 0.0),
        sigma_range=float(sens_d.get("sigma_range", 0.0)),
        dropout=float(sens_d.get("dropout", 0.0)),
        outlier_px=float(sens_d.get("outlier_px", 0.0)),
        outlier_rate=float(sens_d.get("outlier_rate", 0.0)),
    )
    ekf_d = dict(data.get("ekf", {}))
    if "accel_sign" in ekf_d:
        ekf_d["accel_sign"] = int(ekf_d["accel_sign"])
    ekf = EkfConfig(**{k: float(v) if k != "accel_sign" else v
                       for k, v in ekf_d.items()})
    return ScenarioConfig(tank=tank, trajectory=traj, asv=asv,
                          mount=mount, sonar=sonar, sensors=sensors, ekf=ekf)


def load_scenario(path: str) -> ScenarioConfig:
    """Load a scenario TOML file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return scenario_from_dict(data)


def scenario_from_header(header: dict) -> ScenarioConfig:
    """Rebuild the scenario configuration stored in a dataset header."""
    traj = dict(header["trajectory"])
    ekf_d = dict(header.get("ekf", {}))
    if "accel_sign" in ekf_d:
        ekf_d["accel_sign"] = int(ekf_d["accel_sign"])
    return ScenarioConfig(
        tank=TankConfig(**header["tank"]),
        trajectory=TrajectoryConfig(**traj),
        asv=AsvConfig(**header["asv"]),
        mount=MountConfig(**header["mount"]),
        sonar=SonarConfig(**header["sonar"]),
        sensors=SensorConfig(**header["sensors"]),
        ekf=EkfConfig(**ekf_d),
    )
