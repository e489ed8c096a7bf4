from __future__ import annotations

import numpy as np
from scipy.signal import butter, sosfiltfilt

from virtimu.errors import ConfigError, NumericalError

FILTER_ORDER = 4


def lowpass(series: np.ndarray, rate: float, cutoff: float = 10.0) -> np.ndarray:
    """Zero-phase 4th-order Butterworth low-pass (two biquad sections, forward-backward) along axis 0."""
    if not 0.0 < cutoff < rate / 2.0:
        raise ConfigError(f"cutoff must be in (0, {rate / 2.0}) Hz for rate {rate} Hz, got {cutoff}")
    sos = butter(FILTER_ORDER, cutoff, btype="low", fs=rate, output="sos")
    try:
        return sosfiltfilt(sos, np.asarray(series, dtype=np.float64), axis=0)
    except ValueError as e:
        raise NumericalError(f"Series too short for zero-phase filtering: {e}") from e
