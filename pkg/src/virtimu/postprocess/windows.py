from __future__ import annotations

from typing import List, Tuple

import numpy as np
from scipy import stats

from virtimu.core.windowing import compute_window_starts, slice_windows, window_geometry
from virtimu.errors import ConfigError, NumericalError


def har_windows(series: np.ndarray, rate: float, window: float = 1.0, overlap: float = 0.5) -> Tuple[np.ndarray, List[int]]:
    """Sliding windows (W, L, C) for activity recognition, plus their start offsets."""
    x = np.asarray(series)
    length, hop = window_geometry(rate, window, overlap)
    if x.shape[0] < length:
        raise NumericalError(f"Series of {x.shape[0]} samples is shorter than one {length}-sample window")
    starts = compute_window_starts(x.shape[0], length, hop)
    return slice_windows(x, starts, length), starts


def window_labels(labels: np.ndarray, starts: List[int], length: int) -> np.ndarray:
    """Majority label per window; ties go to the smallest label."""
    labels = np.asarray(labels)
    if not np.issubdtype(labels.dtype, np.integer):
        raise ConfigError("activity labels must be integers")
    windows = slice_windows(labels, starts, length)
    return np.asarray(stats.mode(windows, axis=1, keepdims=False).mode, dtype=np.int64)
