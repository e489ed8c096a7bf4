from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from virtimu.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)

INTERPOLATION_METHODS = ("linear", "cubic", "auto")


@dataclass(eq=False)
class GappedSeries:
    sample_rate: float
    samples: np.ndarray  # (N, D); NaN where gated out
    present_mask: np.ndarray  # (N,) bool

    def __post_init__(self) -> None:
        if self.present_mask.shape[0] != self.samples.shape[0]:
            raise ConfigError(f"mask length {self.present_mask.shape[0]} != samples length {self.samples.shape[0]}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.shape[0]) / self.sample_rate

    def gaps(self) -> List[Tuple[int, int]]:
        """Half-open [start, stop) runs of missing samples."""
        missing = ~self.present_mask
        edges = np.diff(np.concatenate([[0], missing.astype(np.int8), [0]]))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1)
        return list(zip(starts.tolist(), stops.tolist()))


def gate_by_confidence(positions: np.ndarray, confidence: np.ndarray, threshold: float, sample_rate: float = 1.0) -> GappedSeries:
    """Keep frames whose confidence is at least `threshold`.

    Example call:
        g = gate_by_confidence(root_xyz, conf, 0.5, sample_rate=30.0)

    Raises:
        ConfigError: threshold outside [0, 1] or length mismatch.
        NumericalError: every frame gated out.
    """
    positions = np.asarray(positions, dtype=np.float64)
    confidence = np.asarray(confidence, dtype=np.float64)
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"confidence threshold must be in [0, 1], got {threshold}")
    if positions.shape[0] != confidence.shape[0]:
        raise ConfigError(f"positions ({positions.shape[0]}) and confidence ({confidence.shape[0]}) lengths differ")
    mask = confidence >= threshold
    if not mask.any():
        raise NumericalError(f"All {len(mask)} frames fall below confidence threshold {threshold}")
    samples = positions.copy()
    samples[~mask] = np.nan
    if not mask.all():
        logger.debug("Gated out %d of %d frames (threshold %.3f)", int((~mask).sum()), len(mask), threshold)
    return GappedSeries(sample_rate=sample_rate, samples=samples, present_mask=mask)


def interpolate_gaps(g: GappedSeries, method: str = "linear", *, max_cubic_gap_s: float = 0.5) -> np.ndarray:
    """Fill gated-out samples.

    Interior gaps use the chosen interpolant over time; leading and trailing gaps take
    the nearest present value. With "auto", interior gaps of at most `max_cubic_gap_s`
    seconds of missing data are filled with the cubic spline and longer ones linearly.

    Raises:
        ConfigError: unknown method.
        NumericalError: fewer than two present samples.
    """
    if method not in INTERPOLATION_METHODS:
        raise ConfigError(f"Unknown interpolation method {method!r}; expected one of {INTERPOLATION_METHODS}")
    present = np.flatnonzero(g.present_mask)
    if present.size < 2:
        raise NumericalError(f"Interpolation needs at least 2 present samples, found {present.size}")

    samples = np.asarray(g.samples, dtype=np.float64)
    squeeze = samples.ndim == 1
    if squeeze:
        samples = samples[:, None]
    out = samples.copy()
    if present.size == samples.shape[0]:
        return out[:, 0] if squeeze else out

    t = g.times
    tp = t[present]
    known = samples[present]
    linear = np.stack([np.interp(t, tp, known[:, d]) for d in range(samples.shape[1])], axis=1)
    cubic = CubicSpline(tp, known, axis=0, bc_type="not-a-knot") if method != "linear" else None

    first, last = present[0], present[-1]
    out[:first] = known[0]
    out[last + 1 :] = known[-1]
    for start, stop in g.gaps():
        if start < first or stop > last:
            continue  # leading/trailing, already extended
        idx = np.arange(start, stop)
        use_cubic = method == "cubic" or (method == "auto" and (stop - start) / g.sample_rate <= max_cubic_gap_s)
        out[idx] = cubic(t[idx]) if use_cubic and cubic is not None else linear[idx]
    return out[:, 0] if squeeze else out
