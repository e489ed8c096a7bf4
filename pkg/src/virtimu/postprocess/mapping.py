"""Rank-based distribution mapping of simulated channels onto a reference distribution."""

from __future__ import annotations

import logging
from typing import List, Sequence

import numpy as np
from scipy.stats import rankdata

from virtimu.errors import ConfigError

logger = logging.getLogger(__name__)

MAP_SCOPES = ("recording", "channel", "global")


def _map_1d(sim: np.ndarray, reference: np.ndarray) -> np.ndarray:
    p = rankdata(sim, method="average") / (sim.size + 1)
    return np.quantile(reference, p, method="weibull")


def distribution_map(sim: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Replace each value by the reference quantile at its rank / (N + 1).

    Example call:
        mapped = distribution_map(sim_accel, real_accel)   # (N, 3) against (M, 3)

    Columns of 2-D inputs are mapped independently. Ties share their average rank, so
    the output is a monotone transform of `sim`.

    Raises:
        ConfigError: empty inputs or mismatched channel counts.
    """
    sim = np.asarray(sim, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if sim.size == 0 or reference.size == 0:
        raise ConfigError("distribution_map needs non-empty simulated and reference data")
    if sim.ndim == 1:
        return _map_1d(sim, reference.reshape(-1))
    if reference.ndim != 2 or reference.shape[1] != sim.shape[1]:
        raise ConfigError(f"reference shaped {reference.shape} does not match {sim.shape[1]} channels")
    return np.stack([_map_1d(sim[:, c], reference[:, c]) for c in range(sim.shape[1])], axis=1)


def map_recordings(sims: Sequence[np.ndarray], references: Sequence[np.ndarray], scope: str = "recording") -> List[np.ndarray]:
    """Map several (N_i, C) recordings.

    recording: recording i against reference i, per channel.
    channel:   each channel against that channel pooled over every reference.
    global:    every channel against all reference values pooled together.
    """
    if scope not in MAP_SCOPES:
        raise ConfigError(f"map scope must be one of {MAP_SCOPES}, got {scope!r}")
    if not sims or not references:
        raise ConfigError("map_recordings needs at least one recording and one reference")
    if scope == "recording":
        if len(sims) != len(references):
            raise ConfigError(f"{len(sims)} recordings but {len(references)} references for per-recording mapping")
        return [distribution_map(s, r) for s, r in zip(sims, references)]
    pooled = np.concatenate([np.asarray(r, dtype=np.float64) for r in references], axis=0)
    if scope == "channel":
        return [distribution_map(s, pooled) for s in sims]
    flat = pooled.reshape(-1)
    out = []
    for s in sims:
        s = np.asarray(s, dtype=np.float64)
        out.append(np.stack([_map_1d(s[:, c], flat) for c in range(s.shape[1])], axis=1))
    return out
