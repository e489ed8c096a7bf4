"""HAR dataset export: X.csv (one flattened window per row), y.csv, meta.json."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from virtimu.errors import ConfigError
from virtimu.motion_io.manifest import write_manifest
from virtimu.schemas import HarExportMeta

logger = logging.getLogger(__name__)

IMU_CHANNELS = ("ax", "ay", "az", "gx", "gy", "gz")


def window_columns(channels: Sequence[str], length: int) -> list[str]:
    return [f"{c}_t{j}" for j in range(length) for c in channels]


def export_har(windows: np.ndarray, labels: Optional[np.ndarray], out_dir: str | Path, meta: HarExportMeta) -> Path:
    """Write a window dataset directory; returns the directory.

    Example call:
        export_har(w, y, "out/har/subject3", HarExportMeta(sample_rate=50, window_sec=1, overlap=0.5, ...))
    """
    w = np.asarray(windows, dtype=np.float64)
    if w.ndim != 3 or w.shape[2] != len(meta.channels):
        raise ConfigError(f"windows shaped {w.shape} do not match {len(meta.channels)} channels")
    if labels is not None and len(labels) != w.shape[0]:
        raise ConfigError(f"{len(labels)} labels for {w.shape[0]} windows")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    x_df = pd.DataFrame(w.reshape(w.shape[0], -1), columns=window_columns(meta.channels, w.shape[1]))
    x_df.to_csv(out / "X.csv", index=False, float_format="%.17g", lineterminator="\n")
    if labels is not None:
        pd.DataFrame({"label": np.asarray(labels)}).to_csv(out / "y.csv", index=False, lineterminator="\n")
    doc = meta.model_dump(mode="json")
    doc.pop("version", None)
    write_manifest(out / "meta.json", doc)
    logger.info("Exported %d HAR windows to %s", w.shape[0], out)
    return out
