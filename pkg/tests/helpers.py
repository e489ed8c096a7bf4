"""Synthetic fixtures shared by the test modules."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from virtimu.core.rotations import to_wxyz
from virtimu.core.types import MotionTrackSet, RegionTrack, SensorSpec
from virtimu.motion_io import store_sensor_spec, store_track_set
from virtimu.simnet.config import NetworkConfig

_S = 0.05
_C = _S * np.cos(np.pi / 6)

# Three zero-centroid triangles in the body frame, one per coordinate plane
LOCAL_TRIANGLES = np.array(
    [
        [[_S, 0.0, 0.0], [-_S / 2, _C, 0.0], [-_S / 2, -_C, 0.0]],
        [[0.0, _S, 0.0], [0.0, -_S / 2, _C], [0.0, -_S / 2, -_C]],
        [[0.0, 0.0, _S], [-_C, 0.0, -_S / 2], [_C, 0.0, -_S / 2]],
    ]
)


def rigid_region(centers: np.ndarray, rotations: Rotation, first_vertex: int = 0) -> RegionTrack:
    """Region whose triangles ride rigidly on (center, rotation) at every frame."""
    mats = rotations.as_matrix()
    verts = centers[:, None, None, :] + np.einsum("nij,tkj->ntki", mats, LOCAL_TRIANGLES)
    tri = np.arange(first_vertex, first_vertex + 9).reshape(3, 3)
    return RegionTrack(triangles=tri, vertices=verts, orientation=to_wxyz(rotations))


def orbit_tracks(
    *,
    rate: float = 100.0,
    seconds: float = 10.0,
    radius: float = 1.0,
    omega: float = 2 * np.pi,
    region: str = "wrist",
    confidence: Optional[np.ndarray] = None,
) -> MotionTrackSet:
    """Body circling the z axis at `omega` rad/s, facing along its path."""
    n = int(round(seconds * rate))
    t = np.arange(n) / rate
    centers = np.stack([radius * np.cos(omega * t), radius * np.sin(omega * t), np.zeros(n)], axis=1)
    rot = Rotation.from_rotvec(np.outer(omega * t, [0.0, 0.0, 1.0]))
    return MotionTrackSet(sample_rate=rate, regions={region: rigid_region(centers, rot)}, confidence=confidence, name="orbit")


def static_tracks(*, rate: float = 60.0, frames: int = 30, region: str = "wrist") -> MotionTrackSet:
    centers = np.tile([0.2, -0.1, 1.0], (frames, 1))
    rot = Rotation.identity(frames)
    return MotionTrackSet(sample_rate=rate, regions={region: rigid_region(centers, rot)}, name="static")


def identity_sensor(region: str = "wrist", rate: float = 100.0) -> SensorSpec:
    return SensorSpec(region=region, rotation=np.eye(3), sample_rate=rate)


def write_inputs(tmp_path: Path, tracks: MotionTrackSet, spec: SensorSpec, stem: str = "rec") -> Tuple[Path, Path]:
    csv_path, _ = store_track_set(tracks, tmp_path / stem)
    sensor_path = tmp_path / f"{stem}.sensor.json"
    store_sensor_spec(spec, sensor_path)
    return csv_path, sensor_path


def tiny_network(**overrides) -> NetworkConfig:
    params = dict(conv_channels=(4, 4, 4), kernel_size=3, hidden_size=5, with_orientation=False)
    params.update(overrides)
    return NetworkConfig(**params)


# ---------- BVH corpus ----------

BVH_SINGLE_ROOT = """HIERARCHY
ROOT Hips
{
	OFFSET 0.0 0.0 0.0
	CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
	End Site
	{
		OFFSET 0.0 10.0 0.0
	}
}
MOTION
Frames: 2
Frame Time: 0.0333333
0.0 90.0 0.0 0.0 0.0 0.0
1.5 90.25 -0.5 10.0 -5.0 2.5
"""

# Root at the origin, elbow one unit along x, hand one unit past the elbow
BVH_TWO_BONE = """HIERARCHY
ROOT Shoulder
{
	OFFSET 0 0 0
	CHANNELS 6 Xposition Yposition Zposition Zrotation Yrotation Xrotation
	JOINT Elbow
	{
		OFFSET 1 0 0
		CHANNELS 1 Zrotation
		End Site
		{
			OFFSET 1 0 0
		}
	}
}
MOTION
Frames: 3
Frame Time: 0.01
0 0 0 0 0 0 0
0 0 0 90 0 0 0
0 0 0 90 0 0 90
"""

BVH_BRANCHING = """HIERARCHY
ROOT Hips
{
	OFFSET 0.0 95.0 0.0
	CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
	JOINT LeftUpLeg
	{
		OFFSET 9.0 0.0 0.0
		CHANNELS 3 Zrotation Xrotation Yrotation
		JOINT LeftLeg
		{
			OFFSET 0.0 -45.0 0.0
			CHANNELS 3 Zrotation Xrotation Yrotation
			End Site
			{
				OFFSET 0.0 -45.0 0.0
			}
		}
	}
	JOINT RightUpLeg
	{
		OFFSET -9.0 0.0 0.0
		CHANNELS 3 Zrotation Xrotation Yrotation
		JOINT RightLeg
		{
			OFFSET 0.0 -45.0 0.0
			CHANNELS 3 Zrotation Xrotation Yrotation
			End Site
			{
				OFFSET 0.0 -45.0 0.0
			}
		}
	}
	JOINT Spine
	{
		OFFSET 0.0 10.0 0.0
		CHANNELS 3 Zrotation Xrotation Yrotation
		End Site
		{
			OFFSET 0.0 30.0 0.0
		}
	}
}
MOTION
Frames: 3
Frame Time: 0.008333
0.0 95.0 0.0 0.0 0.0 0.0 5.0 -10.0 0.0 20.0 0.0 0.0 -5.0 10.0 0.0 15.0 0.0 0.0 1.0 2.0 3.0
0.5 95.1 0.2 1.0 -1.0 0.5 6.0 -12.0 1.0 22.0 0.5 0.0 -6.0 12.0 -1.0 17.0 -0.5 0.0 1.5 2.5 3.5
1.0 95.2 0.4 2.0 -2.0 1.0 7.0 -14.0 2.0 24.0 1.0 0.0 -7.0 14.0 -2.0 19.0 -1.0 0.0 2.0 3.0 4.0
"""

# Joints without channels ride on their parent
BVH_ZERO_CHANNEL = """HIERARCHY
ROOT Pelvis
{
	OFFSET 0 0 0
	CHANNELS 3 Xrotation Yrotation Zrotation
	JOINT Marker
	{
		OFFSET 0 0 1
		CHANNELS 0
		End Site
		{
			OFFSET 0 0 0.5
		}
	}
}
MOTION
Frames: 2
Frame Time: 0.02
0 0 0
30 -15 45
"""

BVH_SCIENTIFIC = """HIERARCHY
ROOT Root
{
	OFFSET 1e-3 -2.5E-2 0
	CHANNELS 3 Xposition Yposition Zposition
	JOINT Tip
	{
		OFFSET 0 1.25e+1 0
		CHANNELS 3 Yrotation Xrotation Zrotation
		End Site
		{
			OFFSET 0 1 0
		}
	}
}
MOTION
Frames: 4
Frame Time: 1e-2
1e-3 2e-3 3e-3 0 0 0
-1.5e-1 0 2.0 12.5 -7.25 3.125
0.1 0.2 0.3 -90 45 180
0 0 0 0.000001 -0.000001 359.999
"""

BVH_CORPUS = {
    "single_root": BVH_SINGLE_ROOT,
    "two_bone": BVH_TWO_BONE,
    "branching": BVH_BRANCHING,
    "zero_channel": BVH_ZERO_CHANNEL,
    "scientific": BVH_SCIENTIFIC,
}
