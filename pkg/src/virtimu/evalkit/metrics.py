from __future__ import annotations

from typing import Optional, Tuple

import numpy as np
from sklearn.metrics import f1_score

from virtimu.core.types import ImuSeries
from virtimu.errors import ConfigError


def _aligned(sim: ImuSeries, gt: ImuSeries, mask: Optional[np.ndarray] = None) -> np.ndarray:
    if len(sim) != len(gt):
        raise ConfigError(f"series lengths differ: {len(sim)} vs {len(gt)}")
    if sim.frame_tag != gt.frame_tag:
        raise ConfigError(f"series frames differ: {sim.frame_tag} vs {gt.frame_tag}")
    if len(sim) == 0:
        raise ConfigError("cannot score empty series")
    if mask is None:
        return np.ones(len(sim), dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (len(sim),):
        raise ConfigError(f"mask of shape {mask.shape} for {len(sim)} samples")
    if not mask.any():
        raise ConfigError("mask excludes every sample")
    return mask


def rmse(sim: ImuSeries, gt: ImuSeries, mask: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """(accel RMSE, gyro RMSE), each pooled over samples and the three axes.

    `mask` keeps only the selected samples, e.g. `sim.interior()` to skip boundary frames.
    """
    keep = _aligned(sim, gt, mask)
    da = sim.accel[keep] - gt.accel[keep]
    dg = sim.gyro[keep] - gt.gyro[keep]
    return float(np.sqrt(np.mean(da * da))), float(np.sqrt(np.mean(dg * dg)))


def rmse_per_axis(sim: ImuSeries, gt: ImuSeries, mask: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    keep = _aligned(sim, gt, mask)
    da = sim.accel[keep] - gt.accel[keep]
    dg = sim.gyro[keep] - gt.gyro[keep]
    return np.sqrt(np.mean(da * da, axis=0)), np.sqrt(np.mean(dg * dg, axis=0))


def macro_f1(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Unweighted mean F1 over classes present in either predictions or labels."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.size == 0 or labels.size == 0:
        raise ConfigError("macro_f1 needs non-empty predictions and labels")
    if predictions.shape != labels.shape:
        raise ConfigError(f"{predictions.size} predictions for {labels.size} labels")
    classes = np.union1d(predictions, labels)
    return float(f1_score(labels, predictions, labels=classes, average="macro", zero_division=0))
