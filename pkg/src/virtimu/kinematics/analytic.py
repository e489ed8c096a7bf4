"""Analytic IMU simulation from mesh-region tracks (double differentiation + triad tracking)."""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from virtimu.core.config import KinematicsConfig
from virtimu.core.types import ImuSeries, MotionTrackSet, SensorSpec
from virtimu.errors import ConfigError
from virtimu.kinematics.derivatives import richardson_second_derivative
from virtimu.kinematics.frames import to_sensor_frame
from virtimu.kinematics.triads import angular_velocity, triangle_triad

logger = logging.getLogger(__name__)


def motion_boundary(accel_boundary: np.ndarray) -> np.ndarray:
    """Combine the acceleration stencil flags with the repeated last gyro sample."""
    boundary = accel_boundary.copy()
    boundary[-1] = True
    return boundary


def region_motion(track_set: MotionTrackSet, region: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Global-frame (a_G, omega_G, boundary) for one region.

    Acceleration is the Richardson second derivative of the mean triangle centroid;
    angular velocity is averaged over the three triangles' triads. `boundary` marks
    samples computed with a fallback stencil.
    """
    reg = track_set.region(region)
    rate = track_set.sample_rate
    accel = richardson_second_derivative(reg.centroids(), rate)
    omegas = []
    for t in range(3):
        v = reg.vertices[:, t]
        omegas.append(angular_velocity(triangle_triad(v[:, 0], v[:, 1], v[:, 2]), rate))
    return accel.values, np.mean(omegas, axis=0), motion_boundary(accel.boundary)


def resample_imu(series: ImuSeries, rate: float) -> ImuSeries:
    """Cubic-spline resampling onto a new rate over the same time span.

    An output sample is flagged as boundary when either neighbouring input sample is.
    """
    if not rate > 0:
        raise ConfigError(f"rate must be > 0, got {rate}")
    if rate == series.sample_rate:
        return series
    t = series.times
    n_out = int(np.floor(t[-1] * rate + 1e-9)) + 1
    t_out = np.arange(n_out) / rate
    data = CubicSpline(t, series.stacked(), axis=0)(t_out)
    boundary = None
    if series.boundary is not None:
        boundary = np.interp(t_out, t, series.boundary.astype(np.float64)) > 0.0
    return ImuSeries(frame_tag=series.frame_tag, sample_rate=rate, accel=data[:, :3], gyro=data[:, 3:], boundary=boundary)


def simulate_analytic(
    track_set: MotionTrackSet,
    spec: SensorSpec,
    cfg: Optional[KinematicsConfig] = None,
) -> Tuple[ImuSeries, ImuSeries]:
    """Simulate a sensor on `spec.region` without a learned model.

    Example call:
        sensor, glob = simulate_analytic(load_track_set("walk.tracks.json"), load_sensor_spec("wrist.json"))

    Returns:
        (sensor-frame series, global-frame series), both at the sensor's sample rate.
        Both carry a `boundary` mask over the samples computed with fallback stencils.
    """
    cfg = cfg or KinematicsConfig()
    spec.validate()
    reg = track_set.region(spec.region)
    a_g, omega_g, boundary = region_motion(track_set, spec.region)
    rate = track_set.sample_rate
    sensor = to_sensor_frame(a_g, omega_g, reg.orientation, spec, gravity_sign=cfg.gravity_sign, sample_rate=rate)
    sensor.boundary = boundary
    glob = ImuSeries(frame_tag="global", sample_rate=rate, accel=a_g, gyro=omega_g, boundary=boundary.copy())
    if spec.sample_rate != rate:
        logger.info("Resampling analytic output from %.6g Hz to %.6g Hz", rate, spec.sample_rate)
        sensor = resample_imu(sensor, spec.sample_rate)
        glob = resample_imu(glob, spec.sample_rate)
    sensor.validate()
    return sensor, glob
