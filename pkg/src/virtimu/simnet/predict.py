from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Optional, Sequence, Tuple

import numpy as np

from virtimu.core.config import KinematicsConfig
from virtimu.core.types import ImuSeries, MotionTrackSet, SensorSpec
from virtimu.core.windowing import compute_window_starts, slice_windows, window_geometry
from virtimu.errors import ConfigError, NumericalError
from virtimu.kinematics.analytic import resample_imu
from virtimu.kinematics.frames import to_sensor_frame
from virtimu.simnet.bundle import SimulatorWeights, WeightBundle
from virtimu.simnet.config import TrainConfig
from virtimu.simnet.network import forward
from virtimu.simnet.windows import region_features

logger = logging.getLogger(__name__)


def predict_windows(bundle: WeightBundle, raw_windows: np.ndarray, *, workers: int = 1) -> np.ndarray:
    """(W, L, 3) predictions for raw (unstandardized) windows, one forward pass per window."""
    x = bundle.standardize(raw_windows)
    out = np.empty(x.shape[:2] + (bundle.config.output_dim,))

    def _one(i: int) -> Tuple[int, np.ndarray]:
        y, _ = forward(bundle.params, bundle.config, x[i : i + 1])
        return i, y[0]

    if workers <= 1 or len(x) <= 1:
        for i in range(len(x)):
            out[i] = _one(i)[1]
        return out
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_one, i) for i in range(len(x))]
        for future in as_completed(futures):
            i, y = future.result()
            out[i] = y
    return out


def stitch_windows(preds: np.ndarray, offsets: Sequence[int], n: int) -> np.ndarray:
    """Average overlapping window predictions with uniform weights into an (n, C) series."""
    total = np.zeros((n, preds.shape[2]))
    count = np.zeros(n)
    length = preds.shape[1]
    for p, start in zip(preds, offsets):
        total[start : start + length] += p
        count[start : start + length] += 1
    uncovered = np.flatnonzero(count == 0)
    if uncovered.size:
        raise NumericalError("Stitched windows leave frames uncovered", frame=int(uncovered[0]))
    return total / count[:, None]


def predict_channel(bundle: WeightBundle, track_set: MotionTrackSet, region: str, cfg: TrainConfig) -> np.ndarray:
    rate = track_set.sample_rate
    length, hop = window_geometry(rate, cfg.window_sec, cfg.overlap)
    feats = region_features(track_set, region, with_orientation=bundle.config.with_orientation)
    n = feats.shape[0]
    if n < length:
        raise NumericalError(f"Track of {n} frames is shorter than one {length}-frame window")
    starts = compute_window_starts(n, length, hop, cover_tail=True)
    preds = predict_windows(bundle, slice_windows(feats, starts, length), workers=cfg.workers)
    return stitch_windows(preds, starts, n)


def predict_series(weights: SimulatorWeights, track_set: MotionTrackSet, region: str, cfg: Optional[TrainConfig] = None) -> ImuSeries:
    """Global-frame IMU prediction for a whole track.

    Windows follow the training geometry; a final right-aligned window covers any
    tail shorter than a hop, and overlapping frames are averaged.
    """
    cfg = cfg or TrainConfig()
    weights.validate()
    accel = predict_channel(weights.accel, track_set, region, cfg)
    gyro = predict_channel(weights.gyro, track_set, region, cfg)
    return ImuSeries(frame_tag="global", sample_rate=track_set.sample_rate, accel=accel, gyro=gyro)


def simulate_learned(
    weights: SimulatorWeights,
    track_set: MotionTrackSet,
    spec: SensorSpec,
    kin: Optional[KinematicsConfig] = None,
    cfg: Optional[TrainConfig] = None,
) -> Tuple[ImuSeries, ImuSeries]:
    """Learned simulation end to end: (sensor-frame series, global-frame series)."""
    kin = kin or KinematicsConfig()
    spec.validate()
    reg = track_set.region(spec.region)
    if weights.accel.config.input_dim != weights.gyro.config.input_dim:
        raise ConfigError("accel and gyro networks expect different inputs")
    glob = predict_series(weights, track_set, spec.region, cfg)
    sensor = to_sensor_frame(glob.accel, glob.gyro, reg.orientation, spec, gravity_sign=kin.gravity_sign, sample_rate=glob.sample_rate)
    if spec.sample_rate != glob.sample_rate:
        sensor = resample_imu(sensor, spec.sample_rate)
        glob = resample_imu(glob, spec.sample_rate)
    return sensor, glob

