from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from virtimu.core.types import MIN_TRIANGLE_AREA
from virtimu.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)

# consecutive frames rotating by this much or more are indistinguishable from a smaller rotation
ALIASING_LIMIT = np.pi - 1e-9


@dataclass(eq=False)
class TriangleTriad:
    origin: np.ndarray  # (..., 3) centroid
    axes: np.ndarray  # (..., 3, 3) columns e1, e2, e3

    @property
    def normal(self) -> np.ndarray:
        return self.axes[..., :, 2]


def triangle_triad(v0: np.ndarray, v1: np.ndarray, v2: np.ndarray) -> TriangleTriad:
    """Orthonormal frame attached to a triangle, single or batched over leading axes.

    e1 follows the first edge, e3 is the outward normal of the counter-clockwise
    winding v0 -> v1 -> v2, and e2 = e3 x e1.

    Raises:
        NumericalError: a triangle with area <= 1e-12 m^2 (frame index of the first one; 0 for
            a single triangle).
    """
    v0, v1, v2 = (np.asarray(v, dtype=np.float64) for v in (v0, v1, v2))
    edge = v1 - v0
    cross = np.cross(edge, v2 - v0)
    norm = np.linalg.norm(cross, axis=-1)
    bad = np.flatnonzero(~(0.5 * np.atleast_1d(norm) > MIN_TRIANGLE_AREA))
    if bad.size:
        raise NumericalError("Degenerate triangle (collinear or coincident vertices)", frame=int(bad[0]))
    e1 = edge / np.linalg.norm(edge, axis=-1, keepdims=True)
    e3 = cross / norm[..., None]
    e2 = np.cross(e3, e1)
    axes = np.stack([e1, e2, e3], axis=-1)
    return TriangleTriad(origin=(v0 + v1 + v2) / 3.0, axes=axes)


def angular_velocity(triads: TriangleTriad | np.ndarray, rate: float) -> np.ndarray:
    """Global-frame angular velocity (N, 3) from a series of frames.

    Example call:
        omega = angular_velocity(triangle_triad(v[:, 0], v[:, 1], v[:, 2]), 60.0)

    The increment R[i+1] R[i]^T is converted to a rotation vector and scaled by the
    rate; the last sample repeats its predecessor.

    Raises:
        NumericalError: rotation of pi or more between consecutive frames.
    """
    mats = triads.axes if isinstance(triads, TriangleTriad) else np.asarray(triads, dtype=np.float64)
    if not rate > 0:
        raise ConfigError(f"rate must be > 0, got {rate}")
    if mats.ndim != 3 or mats.shape[1:] != (3, 3):
        raise ConfigError(f"expected a (N, 3, 3) rotation series, got {mats.shape}")
    if mats.shape[0] < 2:
        raise NumericalError(f"angular_velocity needs at least 2 frames, got {mats.shape[0]}")
    delta = mats[1:] @ np.swapaxes(mats[:-1], 1, 2)
    rotvec = Rotation.from_matrix(delta).as_rotvec()
    angle = np.linalg.norm(rotvec, axis=1)
    aliased = np.flatnonzero(angle >= ALIASING_LIMIT)
    if aliased.size:
        raise NumericalError(f"Rotation of {angle[aliased[0]]:.6f} rad between consecutive frames aliases", frame=int(aliased[0]))
    omega = np.empty((mats.shape[0], 3))
    omega[:-1] = rotvec * rate
    omega[-1] = omega[-2]
    return omega
