"""Imaging-sonar geometry: pixel grid, field of view, target extraction.

A multibeam imaging sonar reports targets on a rectangular range-azimuth
grid.  Columns sweep azimuth from -hfov/2 at u = 0 to +hfov/2 at
u = width-1; rows sweep range from 0 at v = 0 to max_range at
v = height-1.  Both maps are linear and endpoint-inclusive, so pixel and
polar coordinates interconvert exactly.

The sonar frame has x forward along the acoustic axis, y to port
(positive azimuth), z up.  Elevation is folded away by the sensor: a
return at azimuth a constrains the target to the vertical fan plane of
that beam, nothing more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class SonarConfig:
    """Field-of-view and image geometry of the sonar.

    Angles are radians.  Defaults approximate a wide-aperture
    multibeam unit: 130 deg horizontal fan, +/-10 deg vertical
    aperture, 10 m range scale on a 512 x 512 image.
    """

    hfov: float = math.radians(130.0)
    vfov_min: float = math.radians(-10.0)
    vfov_max: float = math.radians(10.0)
    max_range: float = 10.0
    image_width: int = 512
    image_height: int = 512

    def __post_init__(self) -> None:
        if not 0.0 < self.hfov < 2.0 * math.pi:
            raise ValueError("hfov must be in (0, 2*pi)")
        if self.vfov_min > self.vfov_max:
            raise ValueError("vfov_min must not exceed vfov_max")
        if self.max_range <= 0.0:
            raise ValueError("max_range must be positive")
        if self.image_width < 2 or self.image_height < 2:
            raise ValueError("image must be at least 2 x 2")

    @property
    def azimuth_bin(self) -> float:
        """Azimuth step between adjacent columns."""
        return self.hfov / (self.image_width - 1)

    @property
    def range_bin(self) -> float:
        """Range step between adjacent rows."""
        return self.max_range / (self.image_height - 1)


@dataclass(frozen=True)
class Detection:
    """A target location on the sonar image, in (possibly fractional) pixels.

    confidence carries the peak intensity of the blob the detection was
    extracted from; synthetic sources that skip extraction leave it 1.
    """

    u: float
    v: float
    confidence: float = 1.0


def pixel_to_polar(u: float, v: float, cfg: SonarConfig) -> tuple[float, float]:
    """Map image coordinates to (azimuth, range)."""
    azimuth = -cfg.hfov / 2.0 + u * cfg.azimuth_bin
    rng = v * cfg.range_bin
    return azimuth, rng


def polar_to_pixel(azimuth: float, rng: float, cfg: SonarConfig) -> tuple[float, float]:
    """Map (azimuth, range) to image coordinates; inverse of pixel_to_polar."""
    u = (azimuth + cfg.hfov / 2.0) / cfg.azimuth_bin
    v = rng / cfg.range_bin
    return u, v


def in_fov(point: np.ndarray, cfg: SonarConfig) -> tuple[bool, str]:
    """Check whether a sonar-frame point is visible, with a reason code.

    Returns (True, "ok") when the point is inside the acoustic fan, or
    (False, reason) naming the first constraint violated: "behind" for
    x <= 0, then "azimuth", "elevation", "range".
    """
    x, y, z = (float(c) for c in point)
    if x <= 0.0:
        return False, "behind"
    if abs(math.atan2(y, x)) > cfg.hfov / 2.0:
        return False, "azimuth"
    elevation = math.atan2(z, math.hypot(x, y))
    if not cfg.vfov_min <= elevation <= cfg.vfov_max:
        return False, "elevation"
    if math.sqrt(x * x + y * y + z * z) > cfg.max_range:
        return False, "range"
    return True, "ok"


def point_to_polar(point: np.ndarray) -> tuple[float, float]:
    """Azimuth and slant range of a sonar-frame point, as the sensor reports them."""
    x, y, z = (float(c) for c in point)
    return math.atan2(y, x), math.sqrt(x * x + y * y + z * z)


def beam_direction(azimuth: float) -> np.ndarray:
    """Unit vector along the beam at a given azimuth, in the sonar frame."""
    return np.array([math.cos(azimuth), math.sin(azimuth), 0.0])


def beam_plane_normal(azimuth: float) -> np.ndarray:
    """Sonar-frame normal of the vertical fan plane containing the beam.

    Perpendicular to beam_direction(azimuth) and horizontal in the sonar
    frame; the fan plane itself contains the sonar z axis.
    """
    return np.array([math.sin(azimuth), -math.cos(azimuth), 0.0])


def render_target(azimuth: float, rng: float, cfg: SonarConfig,
                  spot_px: float = 2.0, amplitude: float = 1.0) -> np.ndarray:
    """Paint one target as a Gaussian intensity spot on a blank image.

    Returns an image_height x image_width float array.  Useful for
    exercising the extraction path without an acoustic simulator.
    """
    u0, v0 = polar_to_pixel(azimuth, rng, cfg)
    vv, uu = np.mgrid[0 : cfg.image_height, 0 : cfg.image_width]
    d2 = (uu - u0) ** 2 + (vv - v0) ** 2
    return amplitude * np.exp(-d2 / (2.0 * spot_px**2))


def render_scan(sonar_pose, targets, cfg: SonarConfig,
                noise_sigma: float = 0.0,
                rng: np.random.Generator | None = None) -> np.ndarray:
    """Synthesize one intensity image of world-frame spherical targets.

    sonar_pose places the sonar in the world; targets is a list of
    (center, radius) pairs in metres.  Each visible target paints a
    Gaussian spot whose pixel footprint follows from its physical size:
    tall as radius over the range bin, wide as the arc its radius
    subtends at its range.  Targets outside the field of view leave no
    trace.  noise_sigma > 0 adds speckle drawn from the supplied
    generator, so identical seeds render identical scans.
    """
    image = np.zeros((cfg.image_height, cfg.image_width))
    for center, radius in targets:
        center = np.asarray(center, dtype=float)
        if not np.all(np.isfinite(center)) or not math.isfinite(radius):
            raise ValueError("target centers and radii must be finite")
        local = sonar_pose.rot.T @ (center - sonar_pose.trans)
        visible, _ = in_fov(local, cfg)
        if not visible:
            continue
        azimuth, rng_m = point_to_polar(local)
        sigma_v = max(radius / cfg.range_bin, 0.8)
        sigma_u = max(radius / (max(rng_m, cfg.range_bin) * cfg.azimuth_bin), 0.8)
        u0, v0 = polar_to_pixel(azimuth, rng_m, cfg)
        vv, uu = np.mgrid[0 : cfg.image_height, 0 : cfg.image_width]
        image += np.exp(
            -((uu - u0) ** 2 / (2.0 * sigma_u**2)
              + (vv - v0) ** 2 / (2.0 * sigma_v**2))
        )
    if noise_sigma > 0.0:
        if rng is None:
            raise ValueError("speckle noise needs an explicit generator")
        image += rng.rayleigh(scale=noise_sigma, size=image.shape)
    return np.clip(image, 0.0, 1.0)


def detect_centroid(image: np.ndarray, threshold: float) -> list[Detection]:
    """Extract every blob from an intensity image, strongest first.

    Pixels above threshold are grouped into connected components; each
    component yields one detection at its intensity-weighted centroid,
    with confidence equal to the component's peak intensity.  The list
    is ordered by descending confidence and is empty when nothing
    exceeds the threshold.
    """
    img = np.asarray(image, dtype=float)
    mask = img > threshold
    if not mask.any():
        return []
    labels, count = ndimage.label(mask)
    index = range(1, count + 1)
    peaks = ndimage.maximum(img, labels, index=index)
    centers = ndimage.center_of_mass(img, labels, index=index)
    found = [
        Detection(u=float(u0), v=float(v0), confidence=float(peak))
        for (v0, u0), peak in zip(centers, peaks)
    ]
    found.sort(key=lambda d: -d.confidence)
    return found


def scan_to_pgm(image: np.ndarray) -> bytes:
    """Serialize an intensity image as an 8-bit binary graymap."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("expected a 2-D intensity image")
    levels = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    return header + levels.tobytes()
