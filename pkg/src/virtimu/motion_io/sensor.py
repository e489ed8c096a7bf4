from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from virtimu.core.rotations import as_rotation, is_rotation_matrix, quat_norm_deviation, to_wxyz
from virtimu.core.types import QUAT_TOL, STANDARD_GRAVITY, SensorSpec
from virtimu.errors import FormatError, InvariantViolation
from virtimu.motion_io.manifest import read_manifest, write_manifest
from virtimu.schemas import SensorSpecDoc

logger = logging.getLogger(__name__)


def load_sensor_spec(path: str | Path, *, gravity_magnitude: float = STANDARD_GRAVITY) -> SensorSpec:
    """Read a sensor placement document.

    Example call:
        spec = load_sensor_spec("wrist.sensor.json")

    The rotation may be given as a wxyz quaternion or a 3x3 matrix (R_S^B). Gravity
    defaults to +gravity_magnitude (9.80665) along the global z axis.

    Raises:
        FormatError: unreadable JSON, wrong version or schema violation.
        InvariantViolation: rotation not orthonormal / quaternion not unit.
    """
    p = Path(path)
    doc = read_manifest(p, SensorSpecDoc, kind="sensor spec")
    if doc.rotation.quat is not None:
        q = np.asarray(doc.rotation.quat, dtype=np.float64)
        dev = float(quat_norm_deviation(q))
        if dev > QUAT_TOL:
            raise InvariantViolation("unit-quaternion", f"sensor rotation |q| deviates by {dev:.3g}", path=p)
        rotation = as_rotation(q).as_matrix()
    else:
        rotation = np.asarray(doc.rotation.matrix, dtype=np.float64)
        if not is_rotation_matrix(rotation):
            raise InvariantViolation("rotation", "sensor rotation matrix is not orthonormal with det +1", path=p)
    gravity = np.asarray(doc.gravity if doc.gravity is not None else [0.0, 0.0, gravity_magnitude], dtype=np.float64)
    spec = SensorSpec(region=doc.region, rotation=rotation, gravity=gravity, sample_rate=float(doc.sample_rate))
    try:
        spec.validate()
    except InvariantViolation as e:
        raise FormatError(str(e), path=p) from e
    return spec


def store_sensor_spec(spec: SensorSpec, path: str | Path) -> None:
    spec.validate()
    quat = to_wxyz(as_rotation(spec.rotation))
    write_manifest(
        Path(path),
        {
            "region": spec.region,
            "rotation": {"quat": [float(v) for v in quat]},
            "gravity": [float(v) for v in spec.gravity],
            "sample_rate": float(spec.sample_rate),
        },
    )
