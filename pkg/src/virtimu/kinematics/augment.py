from __future__ import annotations

from typing import Optional

import numpy as np

from virtimu.core.rotations import as_rotation, axis_rotation, to_wxyz
from virtimu.core.types import STANDARD_GRAVITY, MotionTrackSet, RegionTrack


def random_rotation_augment(
    track_set: MotionTrackSet,
    rng: np.random.Generator,
    *,
    gravity: np.ndarray | None = None,
    angle: Optional[float] = None,
) -> MotionTrackSet:
    """Rigidly rotate every vertex track and segment orientation about the gravity axis.

    Sensor-frame readings of the rotated set equal those of the original, so the copy
    is a valid training sample when global and inertial frames are not aligned.
    """
    axis = np.asarray(gravity if gravity is not None else (0.0, 0.0, STANDARD_GRAVITY), dtype=np.float64)
    theta = float(rng.uniform(-np.pi, np.pi)) if angle is None else float(angle)
    q = axis_rotation(axis, theta)
    m = q.as_matrix()
    regions = {}
    for name, reg in track_set.regions.items():
        vertices = reg.vertices @ m.T
        orientation = to_wxyz(q * as_rotation(reg.orientation))
        regions[name] = RegionTrack(triangles=reg.triangles.copy(), vertices=vertices, orientation=orientation)
    conf = None if track_set.confidence is None else track_set.confidence.copy()
    return MotionTrackSet(sample_rate=track_set.sample_rate, regions=regions, confidence=conf, name=track_set.name)
