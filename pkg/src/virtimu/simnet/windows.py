from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from virtimu.core.types import ImuSeries, MotionTrackSet
from virtimu.core.windowing import compute_window_starts, slice_windows, window_geometry
from virtimu.errors import ConfigError, NumericalError
from virtimu.simnet.config import TrainConfig

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class WindowSet:
    inputs: np.ndarray  # (W, L, D) standardized
    targets: np.ndarray  # (W, L, 3) global frame
    offsets: List[int]
    mean: np.ndarray  # (D,)
    std: np.ndarray  # (D,)
    sample_rate: float
    length: int
    hop: int

    def __len__(self) -> int:
        return int(self.inputs.shape[0])


def region_features(track_set: MotionTrackSet, region: str, *, with_orientation: bool = False) -> np.ndarray:
    """(N, 27) vertex coordinates per frame, plus the wxyz orientation when requested (N, 31)."""
    reg = track_set.region(region)
    feats = reg.vertices.reshape(reg.frame_count, -1)
    if with_orientation:
        feats = np.concatenate([feats, reg.orientation], axis=1)
    return feats


def feature_stats(features: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Per-channel mean/std pooled over recordings; zero-variance channels get std 1."""
    stacked = np.concatenate(list(features), axis=0)
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0)
    flat = std <= 1e-9 * np.maximum(1.0, np.abs(mean))
    if np.any(flat):
        logger.warning("Zero-variance input channels %s; using std=1", np.flatnonzero(flat).tolist())
        std = np.where(flat, 1.0, std)
    return mean, std


def build_windows(
    track_set: MotionTrackSet,
    region: str,
    targets: ImuSeries,
    cfg: TrainConfig,
    *,
    kind: str = "accel",
    with_orientation: bool = False,
    stats: Tuple[np.ndarray, np.ndarray] | None = None,
) -> WindowSet:
    """Slice a region's vertex track and global-frame targets into training windows.

    Example call:
        ws = build_windows(tracks, "left_wrist", global_imu, TrainConfig(), kind="gyro")

    Args:
        track_set: input tracks.
        region: region whose 3 triangles feed the network.
        targets: global-frame IMU series (use from_sensor_frame on real recordings).
        cfg: window length and overlap.
        kind: "accel" or "gyro" target channels.
        with_orientation: append the segment quaternion to each frame.
        stats: standardization (mean, std); computed from this track when omitted.

    Raises:
        ConfigError: rate/length mismatch, sensor-frame targets, bad window settings.
        NumericalError: track shorter than one window.
    """
    rate = track_set.sample_rate
    cfg.validate(rate)
    if targets.frame_tag != "global":
        raise ConfigError("training targets must be global-frame; convert with from_sensor_frame first")
    if targets.sample_rate != rate:
        raise ConfigError(f"track rate {rate} Hz differs from target rate {targets.sample_rate} Hz")
    if len(targets) != track_set.frame_count:
        raise ConfigError(f"track has {track_set.frame_count} frames, targets {len(targets)}")
    if kind not in ("accel", "gyro"):
        raise ConfigError(f"kind must be accel or gyro, got {kind!r}")

    feats = region_features(track_set, region, with_orientation=with_orientation)
    length, hop = window_geometry(rate, cfg.window_sec, cfg.overlap)
    n = feats.shape[0]
    if n < length:
        raise NumericalError(f"Track of {n} frames is shorter than one {length}-frame window")
    mean, std = stats if stats is not None else feature_stats([feats])
    starts = compute_window_starts(n, length, hop)
    y = targets.accel if kind == "accel" else targets.gyro
    ws = WindowSet(
        inputs=slice_windows((feats - mean) / std, starts, length),
        targets=slice_windows(np.asarray(y, dtype=np.float64), starts, length),
        offsets=starts,
        mean=mean,
        std=std,
        sample_rate=rate,
        length=length,
        hop=hop,
    )
    logger.info("Built %d %s windows (L=%d, hop=%d) from %s/%s", len(ws), kind, length, hop, track_set.name, region)
    return ws


def concat_windows(sets: Sequence[WindowSet]) -> WindowSet:
    """Join window sets that share length and standardization stats."""
    if not sets:
        raise ConfigError("no window sets to join")
    first = sets[0]
    for ws in sets[1:]:
        if ws.length != first.length or not (np.array_equal(ws.mean, first.mean) and np.array_equal(ws.std, first.std)):
            raise ConfigError("window sets differ in length or standardization stats")
    return WindowSet(
        inputs=np.concatenate([ws.inputs for ws in sets], axis=0),
        targets=np.concatenate([ws.targets for ws in sets], axis=0),
        offsets=[o for ws in sets for o in ws.offsets],
        mean=first.mean,
        std=first.std,
        sample_rate=first.sample_rate,
        length=first.length,
        hop=first.hop,
    )
