"""Rotation helpers on top of scipy's Rotation.

Quaternions are stored scalar-first (w, x, y, z) everywhere in virtimu; scipy works
scalar-last, so every conversion goes through :func:`wxyz2xyzw` / :func:`xyzw2wxyz`.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.transform import Rotation

ORTHONORMAL_TOL = 1e-9


def wxyz2xyzw(quat: np.ndarray) -> np.ndarray:
    quat = np.asarray(quat, dtype=np.float64)
    return np.concatenate([quat[..., 1:], quat[..., :1]], axis=-1)


def xyzw2wxyz(quat: np.ndarray) -> np.ndarray:
    quat = np.asarray(quat, dtype=np.float64)
    return np.concatenate([quat[..., -1:], quat[..., :-1]], axis=-1)


def from_wxyz(quat: np.ndarray) -> Rotation:
    return Rotation.from_quat(wxyz2xyzw(quat))


def to_wxyz(rot: Rotation) -> np.ndarray:
    return xyzw2wxyz(rot.as_quat())


def as_rotation(r: np.ndarray | Rotation) -> Rotation:
    """Accept a 3x3 matrix, a wxyz quaternion or a Rotation (single or batched)."""
    if isinstance(r, Rotation):
        return r
    arr = np.asarray(r, dtype=np.float64)
    if arr.shape[-2:] == (3, 3):
        return Rotation.from_matrix(arr)
    if arr.shape[-1] == 4:
        return from_wxyz(arr)
    raise ValueError(f"Invalid rotation shape: {arr.shape}")


def is_rotation_matrix(m: np.ndarray, tol: float = ORTHONORMAL_TOL) -> bool:
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return bool(np.allclose(m.T @ m, np.eye(3), atol=tol, rtol=0.0) and abs(np.linalg.det(m) - 1.0) <= tol)


def quat_norm_deviation(quat: np.ndarray) -> np.ndarray:
    """Per-row |‖q‖ - 1|."""
    return np.abs(np.linalg.norm(np.asarray(quat, dtype=np.float64), axis=-1) - 1.0)


def axis_rotation(axis: np.ndarray, angle: float) -> Rotation:
    axis = np.asarray(axis, dtype=np.float64)
    return Rotation.from_rotvec(axis / np.linalg.norm(axis) * angle)
