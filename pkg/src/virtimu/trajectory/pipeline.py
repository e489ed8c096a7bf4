from __future__ import annotations

import logging
from typing import Dict, Optional

import numpy as np
from scipy.spatial.transform import Slerp

from virtimu.core.config import TrajectoryConfig
from virtimu.core.rotations import from_wxyz, to_wxyz
from virtimu.core.types import MotionTrackSet, RegionTrack
from virtimu.errors import ConfigError
from virtimu.trajectory.gating import gate_by_confidence, interpolate_gaps
from virtimu.trajectory.kalman import KalmanParams, kalman_smooth

logger = logging.getLogger(__name__)


def kalman_params(cfg: TrajectoryConfig) -> KalmanParams:
    return KalmanParams(
        process_noise=cfg.process_noise,
        measurement_noise=cfg.measurement_noise,
        initial_variance=cfg.initial_variance,
    )


def resolve_scale(positions: np.ndarray, known_length: float, estimated_length: float) -> np.ndarray:
    """Rescale a trajectory by known_length / estimated_length (subject height, fixture size...)."""
    if not (known_length > 0 and estimated_length > 0):
        raise ConfigError(f"Scale lengths must be > 0 (known={known_length}, estimated={estimated_length})")
    return np.asarray(positions, dtype=np.float64) * (known_length / estimated_length)


def condition_root_trajectory(
    positions: np.ndarray,
    confidence: np.ndarray,
    rate: float,
    cfg: Optional[TrajectoryConfig] = None,
    *,
    known_length: Optional[float] = None,
    estimated_length: Optional[float] = None,
) -> np.ndarray:
    """Gate, interpolate, smooth and rescale a noisy root trajectory.

    Example call:
        root = condition_root_trajectory(xyz, conf, 30.0, cfg, known_length=1.75, estimated_length=0.62)

    Args:
        positions: (N, 3) root positions from video estimation.
        confidence: (N,) per-frame confidence in [0, 1].
        rate: sample rate in Hz.
        cfg: gating threshold, interpolation and Kalman settings.
        known_length: true length of a reference (meters); requires estimated_length.
        estimated_length: the same reference measured in trajectory units.

    Returns:
        (N, 3) conditioned positions.
    """
    cfg = cfg or TrajectoryConfig()
    if (known_length is None) != (estimated_length is None):
        raise ConfigError("known_length and estimated_length must be given together")
    gapped = gate_by_confidence(positions, confidence, cfg.threshold, sample_rate=rate)
    filled = interpolate_gaps(gapped, cfg.interpolation, max_cubic_gap_s=cfg.max_cubic_gap_s)
    if cfg.smooth:
        filled = kalman_smooth(filled, rate, kalman_params(cfg))
    if known_length is not None and estimated_length is not None:
        filled = resolve_scale(filled, known_length, estimated_length)
        logger.info("Rescaled root trajectory by %.6g", known_length / estimated_length)
    return filled


def _fill_orientation(quat: np.ndarray, mask: np.ndarray, rate: float) -> np.ndarray:
    present = np.flatnonzero(mask)
    if present.size == quat.shape[0]:
        return quat
    t = np.arange(quat.shape[0]) / rate
    slerp = Slerp(t[present], from_wxyz(quat[present]))
    clipped = np.clip(t, t[present[0]], t[present[-1]])
    filled = to_wxyz(slerp(clipped))
    filled[present] = quat[present]
    return filled


def condition_track_set(track_set: MotionTrackSet, cfg: Optional[TrajectoryConfig] = None) -> MotionTrackSet:
    """Apply gating and gap filling to every region's vertices, then Kalman-smooth them.

    Orientations in gated frames are slerped between neighbours. The confidence column
    is dropped from the result since every frame is then filled.
    """
    cfg = cfg or TrajectoryConfig()
    rate = track_set.sample_rate
    confidence = track_set.confidence_or_ones()
    mask = confidence >= cfg.threshold
    regions: Dict[str, RegionTrack] = {}
    for name, reg in track_set.regions.items():
        n = reg.frame_count
        flat = reg.vertices.reshape(n, -1)
        gapped = gate_by_confidence(flat, confidence, cfg.threshold, sample_rate=rate)
        filled = interpolate_gaps(gapped, cfg.interpolation, max_cubic_gap_s=cfg.max_cubic_gap_s)
        if cfg.smooth:
            filled = kalman_smooth(filled, rate, kalman_params(cfg))
        orientation = _fill_orientation(reg.orientation, mask, rate)
        regions[name] = RegionTrack(triangles=reg.triangles.copy(), vertices=filled.reshape(reg.vertices.shape), orientation=orientation)
    out = MotionTrackSet(sample_rate=rate, regions=regions, confidence=None, name=track_set.name)
    out.validate()
    logger.info("Conditioned %d regions (%d of %d frames gated out)", len(regions), int((~mask).sum()), len(mask))
    return out
