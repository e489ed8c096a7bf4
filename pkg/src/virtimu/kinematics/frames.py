"""Global <-> sensor frame transforms for accelerometer and gyroscope readings.

a_S = (R_S^B)^-1 (R_B^G)^-1 (a_G + g),  omega_S = (R_S^B)^-1 (R_B^G)^-1 omega_G
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from virtimu.core.rotations import as_rotation
from virtimu.core.types import ImuSeries, SensorSpec
from virtimu.errors import ConfigError


def _sensor_to_global(r_bg: np.ndarray | Rotation, spec: SensorSpec, n: int) -> np.ndarray:
    """(N, 3, 3) R_B^G R_S^B."""
    mats = as_rotation(r_bg).as_matrix()
    if mats.ndim == 2:
        mats = np.broadcast_to(mats, (n, 3, 3))
    if mats.shape[0] != n:
        raise ConfigError(f"{mats.shape[0]} orientations for {n} samples")
    return mats @ np.asarray(spec.rotation, dtype=np.float64)


def _gravity(spec: SensorSpec, gravity_sign: float) -> np.ndarray:
    return gravity_sign * np.asarray(spec.gravity, dtype=np.float64)


def to_sensor_frame(
    a_g: np.ndarray,
    omega_g: np.ndarray,
    r_bg: np.ndarray | Rotation,
    spec: SensorSpec,
    *,
    gravity_sign: float = 1.0,
    sample_rate: float | None = None,
) -> ImuSeries:
    """Rotate global accelerations (gravity added first) and angular velocities into the sensor frame."""
    a_g = np.asarray(a_g, dtype=np.float64)
    omega_g = np.asarray(omega_g, dtype=np.float64)
    if a_g.shape != omega_g.shape:
        raise ConfigError(f"a_G {a_g.shape} and omega_G {omega_g.shape} lengths differ")
    m = _sensor_to_global(r_bg, spec, a_g.shape[0])
    a_s = np.einsum("nji,nj->ni", m, a_g + _gravity(spec, gravity_sign))
    w_s = np.einsum("nji,nj->ni", m, omega_g)
    return ImuSeries(frame_tag="sensor", sample_rate=sample_rate or spec.sample_rate, accel=a_s, gyro=w_s)


def from_sensor_frame(
    imu: ImuSeries,
    r_bg: np.ndarray | Rotation,
    spec: SensorSpec,
    *,
    gravity_sign: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of to_sensor_frame: (a_G, omega_G) with gravity removed."""
    if imu.frame_tag != "sensor":
        raise ConfigError(f"expected a sensor-frame series, got frame={imu.frame_tag}")
    m = _sensor_to_global(r_bg, spec, len(imu))
    a_g = np.einsum("nij,nj->ni", m, imu.accel) - _gravity(spec, gravity_sign)
    w_g = np.einsum("nij,nj->ni", m, imu.gyro)
    return a_g, w_g
