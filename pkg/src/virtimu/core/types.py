# core/types.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from virtimu.core.rotations import is_rotation_matrix, quat_norm_deviation
from virtimu.errors import ConfigError, InvariantViolation

POSITION_CHANNELS = ("Xposition", "Yposition", "Zposition")
ROTATION_CHANNELS = ("Xrotation", "Yrotation", "Zrotation")
CHANNEL_KEYWORDS = POSITION_CHANNELS + ROTATION_CHANNELS

STANDARD_GRAVITY = 9.80665
QUAT_TOL = 1e-6
MIN_TRIANGLE_AREA = 1e-12

FrameTag = Literal["global", "sensor"]


# ---------- Skeleton (BVH) ----------
@dataclass(frozen=True)
class Joint:
    name: str
    parent: int | None
    offset: tuple[float, float, float]
    channels: tuple[str, ...] = ()
    end_site: bool = False


@dataclass(eq=False)
class SkeletonAnimation:
    joints: list[Joint]
    frame_time: float
    frames: np.ndarray  # (frame_count, channel_count); degrees for rotations

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])

    @property
    def channel_count(self) -> int:
        return sum(len(j.channels) for j in self.joints)

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.frame_time

    def channel_slices(self) -> list[slice]:
        out: list[slice] = []
        start = 0
        for j in self.joints:
            out.append(slice(start, start + len(j.channels)))
            start += len(j.channels)
        return out

    def joint_index(self, name: str) -> int:
        for i, j in enumerate(self.joints):
            if j.name == name:
                return i
        raise ConfigError(f"Unknown joint: {name}")

    def validate(self) -> None:
        roots = [i for i, j in enumerate(self.joints) if j.parent is None]
        if len(roots) != 1 or roots[0] != 0:
            raise InvariantViolation("single-root", f"expected exactly one root joint first, found {len(roots)}")
        for i, j in enumerate(self.joints[1:], start=1):
            if j.parent is None or not (0 <= j.parent < i):
                raise InvariantViolation("parent-order", f"joint {j.name!r} parent index {j.parent} does not precede it")
        if self.frames.ndim != 2 or self.frames.shape[1] != self.channel_count:
            raise InvariantViolation(
                "frame-width",
                f"frame rows have {self.frames.shape[-1] if self.frames.ndim else 0} values, expected {self.channel_count}",
            )
        if not self.frame_time > 0:
            raise InvariantViolation("frame-time", f"frame_time must be > 0, got {self.frame_time}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkeletonAnimation):
            return NotImplemented
        return (
            self.joints == other.joints
            and self.frame_time == other.frame_time
            and self.frames.shape == other.frames.shape
            and bool(np.array_equal(self.frames, other.frames))
        )


# ---------- Mesh tracks ----------
@dataclass(eq=False)
class RegionTrack:
    triangles: np.ndarray  # (3, 3) vertex ids, counter-clockwise as listed
    vertices: np.ndarray  # (frames, 3 triangles, 3 vertices, 3 coords), meters, global frame
    orientation: np.ndarray  # (frames, 4) R_B^G as wxyz

    @property
    def vertex_ids(self) -> list[int]:
        return [int(v) for v in self.triangles.reshape(-1)]

    @property
    def frame_count(self) -> int:
        return int(self.vertices.shape[0])

    def centroids(self) -> np.ndarray:
        """(frames, 3) mean of the three triangle centroids."""
        return self.vertices.mean(axis=(1, 2))


@dataclass(eq=False)
class MotionTrackSet:
    sample_rate: float
    regions: dict[str, RegionTrack]
    confidence: np.ndarray | None = None
    name: str = "tracks"

    @property
    def frame_count(self) -> int:
        if not self.regions:
            return 0
        return next(iter(self.regions.values())).frame_count

    def region(self, name: str) -> RegionTrack:
        try:
            return self.regions[name]
        except KeyError:
            raise ConfigError(f"Unknown region {name!r}; available: {sorted(self.regions)}") from None

    def confidence_or_ones(self) -> np.ndarray:
        if self.confidence is None:
            return np.ones(self.frame_count)
        return self.confidence

    def validate(self, path: str | None = None) -> None:
        if not self.sample_rate > 0:
            raise InvariantViolation("sample-rate", f"must be > 0, got {self.sample_rate}", path=path)
        n = self.frame_count
        for name, reg in self.regions.items():
            tri = np.asarray(reg.triangles)
            if tri.shape != (3, 3):
                raise InvariantViolation("three-triangles", f"expected 3 triangles of 3 vertices, got shape {tri.shape}", region=name, path=path)
            if len(set(reg.vertex_ids)) != 9:
                raise InvariantViolation("distinct-vertices", "expected 9 distinct vertex ids", region=name, path=path)
            if reg.vertices.shape != (n, 3, 3, 3) or reg.orientation.shape != (n, 4):
                raise InvariantViolation("frame-count", "per-frame arrays disagree on frame count", region=name, path=path)
            dev = quat_norm_deviation(reg.orientation)
            bad = np.flatnonzero(dev > QUAT_TOL)
            if bad.size:
                raise InvariantViolation("unit-quaternion", f"|q| deviates from 1 by {dev[bad[0]]:.3g}", region=name, frame=int(bad[0]), path=path)
            v = reg.vertices
            cross = np.cross(v[:, :, 1] - v[:, :, 0], v[:, :, 2] - v[:, :, 0])
            area = 0.5 * np.linalg.norm(cross, axis=-1)  # (frames, 3)
            bad_f, bad_t = np.nonzero(~(area > MIN_TRIANGLE_AREA))
            if bad_f.size:
                raise InvariantViolation(
                    "non-collinear",
                    f"triangle {int(bad_t[0])} has area {area[bad_f[0], bad_t[0]]:.3g} m^2",
                    region=name,
                    frame=int(bad_f[0]),
                    path=path,
                )
        if self.confidence is not None:
            c = self.confidence
            if c.shape != (n,) or np.any((c < 0) | (c > 1)) or not np.all(np.isfinite(c)):
                raise InvariantViolation("confidence", "confidence must be one value in [0,1] per frame", path=path)


# ---------- Sensor ----------
@dataclass(eq=False)
class SensorSpec:
    region: str
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))  # R_S^B, sensor -> bone
    gravity: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, STANDARD_GRAVITY]))
    sample_rate: float = 60.0

    def validate(self) -> None:
        if not is_rotation_matrix(self.rotation):
            raise InvariantViolation("rotation", "R_S^B must be orthonormal with determinant +1")
        g = np.asarray(self.gravity, dtype=np.float64)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise InvariantViolation("gravity", "gravity must be a finite 3-vector")
        if not self.sample_rate > 0:
            raise InvariantViolation("sample-rate", f"must be > 0, got {self.sample_rate}")


# ---------- IMU ----------
@dataclass(eq=False)
class ImuSeries:
    frame_tag: FrameTag
    sample_rate: float
    accel: np.ndarray  # (N, 3) m/s^2
    gyro: np.ndarray  # (N, 3) rad/s
    boundary: Optional[np.ndarray] = None  # (N,) True where a fallback derivative stencil was used

    def __len__(self) -> int:
        return int(self.accel.shape[0])

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate

    def stacked(self) -> np.ndarray:
        """(N, 6) accel then gyro."""
        return np.concatenate([self.accel, self.gyro], axis=1)

    def interior(self) -> np.ndarray:
        """(N,) mask of samples not flagged as boundary."""
        if self.boundary is None:
            return np.ones(len(self), dtype=bool)
        return ~self.boundary

    def validate(self) -> None:
        if self.frame_tag not in ("global", "sensor"):
            raise InvariantViolation("frame-tag", f"unknown frame tag {self.frame_tag!r}")
        if self.accel.shape != self.gyro.shape or self.accel.ndim != 2 or self.accel.shape[1] != 3:
            raise InvariantViolation("equal-length", f"accel {self.accel.shape} and gyro {self.gyro.shape} must both be (N, 3)")
        if not (np.all(np.isfinite(self.accel)) and np.all(np.isfinite(self.gyro))):
            raise InvariantViolation("finite", "IMU series contains non-finite values")
        if self.boundary is not None and self.boundary.shape != (len(self),):
            raise InvariantViolation("equal-length", f"boundary mask {self.boundary.shape} does not match {len(self)} samples")
        if not self.sample_rate > 0:
            raise InvariantViolation("sample-rate", f"must be > 0, got {self.sample_rate}")
