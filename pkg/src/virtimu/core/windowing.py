from __future__ import annotations

from typing import List, Tuple

import numpy as np

from virtimu.errors import ConfigError


def window_geometry(rate: float, window_sec: float, overlap: float) -> Tuple[int, int]:
    """Return (window length L, hop) in samples for a window/overlap pair."""
    if not 0.0 <= overlap < 1.0:
        raise ConfigError(f"overlap must be in [0, 1), got {overlap}")
    if not rate > 0 or not window_sec > 0:
        raise ConfigError(f"rate and window must be > 0 (rate={rate}, window={window_sec})")
    length = int(round(window_sec * rate))
    if length < 1:
        raise ConfigError(f"window of {window_sec}s at {rate} Hz is shorter than one sample")
    hop = max(1, int(round(length * (1.0 - overlap))))
    return length, hop


def window_count(n: int, length: int, hop: int) -> int:
    if n < length:
        return 0
    return (n - length) // hop + 1


def compute_window_starts(n: int, length: int, hop: int, *, cover_tail: bool = False) -> List[int]:
    """Start offsets of sliding windows over n samples.

    With cover_tail, one extra right-aligned window is appended when the regular
    windows stop short of the last sample.
    """
    count = window_count(n, length, hop)
    starts = [i * hop for i in range(count)]
    if cover_tail and starts and starts[-1] + length < n:
        starts.append(n - length)
    return starts


def slice_windows(data: np.ndarray, starts: List[int], length: int) -> np.ndarray:
    """Stack data[s:s+length] for every start along axis 0."""
    if not starts:
        return np.empty((0, length) + data.shape[1:], dtype=data.dtype)
    return np.stack([data[s : s + length] for s in starts], axis=0)
