from .gating import GappedSeries, gate_by_confidence, interpolate_gaps
from .kalman import KalmanParams, kalman_smooth
from .pipeline import condition_root_trajectory, condition_track_set, resolve_scale

__all__ = [
    "GappedSeries",
    "KalmanParams",
    "condition_root_trajectory",
    "condition_track_set",
    "gate_by_confidence",
    "interpolate_gaps",
    "kalman_smooth",
    "resolve_scale",
]
