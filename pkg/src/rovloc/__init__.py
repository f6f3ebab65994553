"""Collaborative positioning of an underwater target from a surface vehicle.

A surface vehicle localizes itself with planar SLAM and an IMU-driven
roll/pitch filter; its imaging sonar sees the target as a range-azimuth
detection; the target reports its own depth.  One detection plus one
depth sample then fixes the target's 3D world position in closed form.
The package also ships a deterministic tank-scale scenario simulator
and an evaluation pipeline for end-to-end accuracy studies.
"""

from .attitude import (
    AttitudeEkf,
    EkfConfig,
    MeasurementRejected,
    NumericalDivergence,
    PlanarFix,
    fuse_asv_pose,
)
from .geometry import (
    EulerZYX,
    GimbalLockError,
    Pose3,
    compose,
    euler_zyx_to_rot,
    invert,
    rot_to_euler_zyx,
    transform_direction,
    transform_point,
)
from .metrics import associate, compute_metrics, format_report
from .pipeline import PipelineResult, replay, run_pipeline
from .scenario import (
    AsvConfig,
    InfeasibleScenario,
    MountConfig,
    ScenarioConfig,
    SensorConfig,
    TankConfig,
    TrajectoryConfig,
    load_scenario,
    scenario_from_header,
    simulate,
)
from .solver import (
    AmbiguousSolution,
    DegeneratePlane,
    NoIntersection,
    NoValidCandidate,
    PositionFix,
    SolverConfig,
    SolverError,
    brute_force_solve,
    solve_position,
    sonar_pose_world,
)
from .sonar import (
    Detection,
    SonarConfig,
    beam_plane_normal,
    detect_centroid,
    in_fov,
    pixel_to_polar,
    polar_to_pixel,
    render_scan,
    scan_to_pgm,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSolution",
    "AsvConfig",
    "AttitudeEkf",
    "DegeneratePlane",
    "Detection",
    "EkfConfig",
    "EulerZYX",
    "GimbalLockError",
    "InfeasibleScenario",
    "MeasurementRejected",
    "MountConfig",
    "NoIntersection",
    "NoValidCandidate",
    "NumericalDivergence",
    "PipelineResult",
    "PlanarFix",
    "Pose3",
    "PositionFix",
    "ScenarioConfig",
    "SensorConfig",
    "SolverConfig",
    "SolverError",
    "SonarConfig",
    "TankConfig",
    "TrajectoryConfig",
    "associate",
    "beam_plane_normal",
    "brute_force_solve",
    "compose",
    "compute_metrics",
    "detect_centroid",
    "euler_zyx_to_rot",
    "format_report",
    "fuse_asv_pose",
    "in_fov",
    "invert",
    "load_scenario",
    "pixel_to_polar",
    "polar_to_pixel",
    "render_scan",
    "replay",
    "rot_to_euler_zyx",
    "run_pipeline",
    "scan_to_pgm",
    "scenario_from_header",
    "simulate",
    "solve_position",
    "sonar_pose_world",
    "transform_direction",
    "transform_point",
    "__version__",
]
