"""IMU series CSV: one comment line with frame tag and rate, then t,ax,ay,az,gx,gy,gz."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from virtimu.core.types import ImuSeries
from virtimu.errors import FormatError, InvariantViolation
from virtimu.motion_io.tables import read_table

logger = logging.getLogger(__name__)

IMU_COLUMNS = ["t", "ax", "ay", "az", "gx", "gy", "gz"]
FLOAT_FORMAT = "%.17g"


def _parse_comment(line: str, path: Path) -> Dict[str, str]:
    if not line.startswith("#"):
        raise FormatError("Missing '# frame=<tag> rate=<Hz>' header line", path=path, line=1)
    fields = {}
    for tok in line[1:].split():
        key, sep, value = tok.partition("=")
        if sep:
            fields[key] = value
    return fields


def read_imu_csv(path: str | Path) -> ImuSeries:
    p = Path(path)
    with open(p, "r", encoding="utf-8") as f:
        try:
            first = f.readline()
        except UnicodeDecodeError as e:
            raise FormatError(f"IMU file is not valid UTF-8 (byte offset {e.start})", path=p, line=1) from e
        header = _parse_comment(first.strip(), p)
        if "frame" not in header or "rate" not in header:
            raise FormatError("Header line must declare frame=<tag> and rate=<Hz>", path=p, line=1)
        try:
            rate = float(header["rate"])
        except ValueError:
            raise FormatError(f"rate {header['rate']!r} is not a number", path=p, line=1) from None
        df = read_table(f, path=p, what="IMU rows", float_precision="round_trip")
    if list(df.columns) != IMU_COLUMNS:
        raise FormatError(f"Expected columns {','.join(IMU_COLUMNS)}, found {','.join(map(str, df.columns))}", path=p, line=2)
    values = df[IMU_COLUMNS].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    bad = np.flatnonzero(~np.all(np.isfinite(values), axis=1))
    if bad.size:
        # rows start after the comment and column header lines
        raise FormatError("Missing or non-numeric value in IMU row", path=p, line=int(bad[0]) + 3)
    series = ImuSeries(frame_tag=header["frame"], sample_rate=rate, accel=values[:, 1:4].copy(), gyro=values[:, 4:7].copy())  # type: ignore[arg-type]
    try:
        series.validate()
    except InvariantViolation as e:
        raise FormatError(str(e), path=p) from e
    logger.debug("Read %d IMU samples (%s frame, %s Hz) from %s", len(series), series.frame_tag, rate, p)
    return series


def write_imu_csv(series: ImuSeries, path: str | Path) -> None:
    series.validate()
    df = pd.DataFrame(np.column_stack([series.times, series.accel, series.gyro]), columns=IMU_COLUMNS)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# frame={series.frame_tag} rate={float(series.sample_rate)!r}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
