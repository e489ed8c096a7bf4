from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from filterpy.common import Q_discrete_white_noise
from filterpy.kalman import KalmanFilter

from virtimu.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KalmanParams:
    process_noise: float = 1.0  # variance of the acceleration random walk, (m/s^2)^2
    measurement_noise: float = 0.01  # m^2
    initial_variance: float = 10.0  # m^2

    def validate(self) -> None:
        for name in ("process_noise", "measurement_noise", "initial_variance"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ConfigError(f"Kalman {name} must be > 0, got {v}")


def _axis_filter(z: np.ndarray, rate: float, p: KalmanParams) -> KalmanFilter:
    dt = 1.0 / rate
    kf = KalmanFilter(dim_x=2, dim_z=1)
    kf.F = np.array([[1.0, dt], [0.0, 1.0]])
    kf.H = np.array([[1.0, 0.0]])
    kf.Q = Q_discrete_white_noise(dim=2, dt=dt, var=p.process_noise)
    kf.R = np.array([[p.measurement_noise]])
    kf.P = np.eye(2) * p.initial_variance
    # two-point start: lines and constants pass through unchanged
    kf.x = np.array([[z[0]], [(z[1] - z[0]) * rate]])
    return kf


def kalman_smooth(positions: np.ndarray, rate: float, p: KalmanParams | None = None) -> np.ndarray:
    """Per-axis constant-velocity Kalman filter followed by an RTS backward pass.

    Example call:
        smoothed = kalman_smooth(root_xyz, 30.0, KalmanParams(measurement_noise=0.0025))

    Args:
        positions: (N,) or (N, D) series, N >= 2.
        rate: sample rate in Hz.
        p: noise parameters, all strictly positive.

    Returns:
        Array with the same shape as `positions`.
    """
    p = p or KalmanParams()
    p.validate()
    if not rate > 0:
        raise ConfigError(f"rate must be > 0, got {rate}")
    x = np.asarray(positions, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[:, None]
    if x.shape[0] < 2:
        raise NumericalError(f"Kalman smoothing needs at least 2 samples, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise NumericalError("Kalman smoothing input contains non-finite values")

    out = np.empty_like(x)
    for d in range(x.shape[1]):
        z = x[:, d]
        kf = _axis_filter(z, rate, p)
        means, covs, _, _ = kf.batch_filter(z.reshape(-1, 1), update_first=True)
        smoothed, _, _, _ = kf.rts_smoother(means, covs)
        out[:, d] = smoothed[:, 0, 0]
    return out[:, 0] if squeeze else out
