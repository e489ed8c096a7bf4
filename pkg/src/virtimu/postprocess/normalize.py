from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from sklearn.preprocessing import StandardScaler

from virtimu.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class NormalizationStats:
    mean: np.ndarray
    scale: np.ndarray
    zero_variance: np.ndarray  # bool per channel; those channels are only centered

    @property
    def flagged(self) -> bool:
        return bool(self.zero_variance.any())


def normalize(series: np.ndarray) -> Tuple[np.ndarray, NormalizationStats]:
    """Per-channel z-score; constant channels are centered and flagged."""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ConfigError(f"normalize expects a non-empty (N, C) series, got {x.shape}")
    scaler = StandardScaler()
    out = scaler.fit_transform(x)
    zero_var = np.ptp(x, axis=0) == 0
    if zero_var.any():
        logger.warning("Zero-variance channels %s passed through centered", np.flatnonzero(zero_var).tolist())
    return out, NormalizationStats(mean=scaler.mean_.copy(), scale=scaler.scale_.copy(), zero_variance=zero_var)


def denormalize(series: np.ndarray, stats: NormalizationStats) -> np.ndarray:
    return np.asarray(series, dtype=np.float64) * stats.scale + stats.mean
