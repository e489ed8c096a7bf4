"""Mesh-track files: `<name>.tracks.csv` plus a `<name>.tracks.json` sidecar manifest."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from virtimu.core.rotations import quat_norm_deviation
from virtimu.core.types import QUAT_TOL, MotionTrackSet, RegionTrack
from virtimu.errors import FormatError, InvariantViolation
from virtimu.motion_io.manifest import read_manifest, write_manifest
from virtimu.motion_io.tables import read_table
from virtimu.schemas import TrackManifest

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
# Quaternions further than this from unit norm are rejected rather than renormalized
RENORM_TOL = 1e-3
_QUAT = ("qw", "qx", "qy", "qz")


def track_paths(path: str | Path) -> Tuple[Path, Path]:
    """(csv, manifest) for a stem, a `.tracks.csv` or a `.tracks.json` path."""
    p = Path(path)
    name = p.name
    for suffix in (".tracks.csv", ".tracks.json"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    return p.with_name(f"{name}.tracks.csv"), p.with_name(f"{name}.tracks.json")


def _quat_columns(region: str, multi: bool) -> List[str]:
    return [f"{region}_{c}" for c in _QUAT] if multi else list(_QUAT)


def _ordered_vertex_ids(triangles: Dict[str, np.ndarray]) -> List[int]:
    seen: Dict[int, None] = {}
    for tri in triangles.values():
        for vid in np.asarray(tri).reshape(-1):
            seen.setdefault(int(vid), None)
    return list(seen)


def load_track_set(path: str | Path) -> MotionTrackSet:
    """Load a mesh-track set and validate it.

    Example call:
        tracks = load_track_set("data/walk01.tracks.json")

    Args:
        path: the manifest, the CSV, or their common stem.

    Returns:
        MotionTrackSet with per-region vertex positions and orientations.

    Raises:
        FormatError: missing columns, truncated rows, wrong manifest version.
        InvariantViolation: quaternion far from unit norm, degenerate triangles, etc.
    """
    csv_path, json_path = track_paths(path)
    manifest = read_manifest(json_path, TrackManifest, kind="track manifest")
    if not manifest.regions:
        raise FormatError("Track manifest lists no regions", path=json_path)

    df = read_table(csv_path, what="track rows", float_precision="round_trip")

    n = len(df)
    if manifest.frames is not None and n != manifest.frames:
        raise FormatError(f"Truncated track file: manifest declares {manifest.frames} frames, found {n}", path=csv_path, line=n + 1)

    triangles = {name: np.asarray(entry.triangles, dtype=np.int64) for name, entry in manifest.regions.items()}
    multi = len(triangles) > 1
    required = ["frame", "t"]
    for vid in _ordered_vertex_ids(triangles):
        required += [f"{vid}_x", f"{vid}_y", f"{vid}_z"]
    quat_cols: Dict[str, List[str]] = {}
    for name in triangles:
        cols = _quat_columns(name, multi)
        if not multi and cols[0] not in df.columns and f"{name}_qw" in df.columns:
            cols = _quat_columns(name, True)
        quat_cols[name] = cols
        required += cols
    has_conf = manifest.has_confidence or "conf" in df.columns
    if has_conf:
        required.append("conf")
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise FormatError(f"Missing columns: {', '.join(missing[:6])}{' ...' if len(missing) > 6 else ''}", path=csv_path, line=1)

    values = df[required].apply(pd.to_numeric, errors="coerce")
    bad_rows = np.flatnonzero(values.isna().any(axis=1).to_numpy())
    if bad_rows.size:
        # header is line 1
        raise FormatError("Truncated or non-numeric track row", path=csv_path, line=int(bad_rows[0]) + 2)

    regions: Dict[str, RegionTrack] = {}
    for name, tri in triangles.items():
        verts = np.empty((n, 3, 3, 3), dtype=np.float64)
        for t in range(3):
            for k in range(3):
                vid = int(tri[t, k])
                verts[:, t, k] = values[[f"{vid}_x", f"{vid}_y", f"{vid}_z"]].to_numpy(dtype=np.float64)
        quat = values[quat_cols[name]].to_numpy(dtype=np.float64)
        quat = _renormalize(quat, name, json_path)
        regions[name] = RegionTrack(triangles=tri, vertices=verts, orientation=quat)

    confidence = values["conf"].to_numpy(dtype=np.float64) if has_conf else None
    track_set = MotionTrackSet(
        sample_rate=float(manifest.sample_rate),
        regions=regions,
        confidence=confidence,
        name=json_path.name[: -len(".tracks.json")],
    )
    track_set.validate(path=str(csv_path))
    logger.info("Loaded track set %s: %d frames, regions=%s", track_set.name, n, list(regions))
    return track_set


def _renormalize(quat: np.ndarray, region: str, path: Path) -> np.ndarray:
    dev = quat_norm_deviation(quat)
    far = np.flatnonzero(dev > RENORM_TOL)
    if far.size:
        raise InvariantViolation(
            "unit-quaternion",
            f"|q| deviates from 1 by {dev[far[0]]:.3g}",
            region=region,
            frame=int(far[0]),
            path=path,
        )
    if np.any(dev > QUAT_TOL):
        logger.warning("Region %s: renormalized %d quaternions (max deviation %.3g)", region, int(np.sum(dev > QUAT_TOL)), float(dev.max()))
    if not quat.size:
        return quat
    return quat / np.linalg.norm(quat, axis=-1, keepdims=True)


def store_track_set(track_set: MotionTrackSet, path: str | Path) -> Tuple[Path, Path]:
    """Write the CSV and manifest; returns their paths."""
    track_set.validate()
    csv_path, json_path = track_paths(path)
    n = track_set.frame_count
    multi = len(track_set.regions) > 1

    columns: Dict[str, np.ndarray] = {
        "frame": np.arange(n, dtype=np.int64),
        "t": np.arange(n) / track_set.sample_rate,
    }
    for name, reg in track_set.regions.items():
        for t in range(3):
            for k in range(3):
                vid = int(reg.triangles[t, k])
                if f"{vid}_x" in columns:
                    if not np.array_equal(columns[f"{vid}_x"], reg.vertices[:, t, k, 0]):
                        raise InvariantViolation("shared-vertex", f"vertex {vid} has different positions in two regions", region=name)
                    continue
                for c, axis in enumerate("xyz"):
                    columns[f"{vid}_{axis}"] = reg.vertices[:, t, k, c]
    for name, reg in track_set.regions.items():
        for col, values in zip(_quat_columns(name, multi), reg.orientation.T):
            columns[col] = values
    if track_set.confidence is not None:
        columns["conf"] = track_set.confidence

    df = pd.DataFrame(columns)
    df.to_csv(csv_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    write_manifest(
        json_path,
        {
            "sample_rate": float(track_set.sample_rate),
            "frames": n,
            "regions": {name: {"triangles": reg.triangles.tolist()} for name, reg in track_set.regions.items()},
            "has_confidence": track_set.confidence is not None,
        },
    )
    return csv_path, json_path
