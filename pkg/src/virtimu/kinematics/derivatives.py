"""Finite-difference second derivatives of sampled positions."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from virtimu.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class DerivativeResult:
    values: np.ndarray  # same shape as the input series
    boundary: np.ndarray  # (N,) True where a lower-order fallback stencil was used


def _check(x: np.ndarray, rate: float, minimum: int, name: str) -> np.ndarray:
    if not rate > 0:
        raise ConfigError(f"rate must be > 0, got {rate}")
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < minimum:
        raise NumericalError(f"{name} needs at least {minimum} samples, got {x.shape[0]}")
    return x


def central_second_derivative(x: np.ndarray, rate: float) -> DerivativeResult:
    """Three-point central stencil, O(h^2); endpoints use one-sided stencils."""
    x = _check(x, rate, 3, "central_second_derivative")
    r2 = rate * rate
    out = np.empty_like(x)
    out[1:-1] = (x[:-2] - 2.0 * x[1:-1] + x[2:]) * r2
    if x.shape[0] >= 4:
        out[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) * r2
        out[-1] = (2.0 * x[-1] - 5.0 * x[-2] + 4.0 * x[-3] - x[-4]) * r2
    else:
        out[0] = out[1]
        out[-1] = out[1]
        logger.debug("Series of %d samples too short for one-sided end stencils; ends copy the interior value", x.shape[0])
    boundary = np.zeros(x.shape[0], dtype=bool)
    boundary[[0, -1]] = True
    return DerivativeResult(values=out, boundary=boundary)


def richardson_second_derivative(x: np.ndarray, rate: float) -> DerivativeResult:
    """Five-point stencil, O(h^4).

    The two samples at each end fall back to the central result and are flagged
    in `boundary`.
    """
    x = _check(x, rate, 5, "richardson_second_derivative")
    central = central_second_derivative(x, rate)
    out = central.values.copy()
    out[2:-2] = (-x[:-4] + 16.0 * x[1:-3] - 30.0 * x[2:-2] + 16.0 * x[3:-1] - x[4:]) * (rate * rate / 12.0)
    boundary = np.zeros(x.shape[0], dtype=bool)
    boundary[[0, 1, -2, -1]] = True
    logger.debug("Richardson stencil: samples 0, 1, %d, %d use the central fallback", x.shape[0] - 2, x.shape[0] - 1)
    return DerivativeResult(values=out, boundary=boundary)
