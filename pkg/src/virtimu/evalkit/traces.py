"""Side-by-side trace files for plotting two IMU series against each other."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from virtimu.core.types import ImuSeries
from virtimu.errors import FormatError
from virtimu.evalkit.metrics import rmse, rmse_per_axis
from virtimu.motion_io.tables import read_table

AXES = ("ax", "ay", "az", "gx", "gy", "gz")


@dataclass(eq=False)
class TraceFile:
    names: Tuple[str, str]
    a: ImuSeries
    b: ImuSeries
    rmse: Dict[str, float]


def compare_traces(a: ImuSeries, b: ImuSeries, path: str | Path, *, names: Tuple[str, str] = ("sim", "gt")) -> Path:
    """Write aligned per-axis columns of both series and their residual (a - b).

    Comment rows at the top carry pooled and per-axis RMSE.
    """
    acc, gyr = rmse(a, b)
    acc_axes, gyr_axes = rmse_per_axis(a, b)
    na, nb = names
    cols: Dict[str, np.ndarray] = {"t": a.times}
    sa, sb = a.stacked(), b.stacked()
    for i, ax in enumerate(AXES):
        cols[f"{na}_{ax}"] = sa[:, i]
    for i, ax in enumerate(AXES):
        cols[f"{nb}_{ax}"] = sb[:, i]
    for i, ax in enumerate(AXES):
        cols[f"res_{ax}"] = sa[:, i] - sb[:, i]
    p = Path(path)
    with open(p, "w", encoding="utf-8", newline="") as f:
        f.write(f"# names={na},{nb} frame={a.frame_tag} rate={float(a.sample_rate)!r}\n")
        f.write(f"# rmse_accel={acc!r} rmse_gyro={gyr!r}\n")
        per_axis = " ".join(f"rmse_{ax}={float(v)!r}" for ax, v in zip(AXES, np.concatenate([acc_axes, gyr_axes])))
        f.write(f"# {per_axis}\n")
        pd.DataFrame(cols).to_csv(f, index=False, float_format="%.17g", lineterminator="\n")
    return p


def _comment_fields(line: str) -> Dict[str, str]:
    return dict(tok.split("=", 1) for tok in line.lstrip("#").split() if "=" in tok)


def read_trace_csv(path: str | Path) -> TraceFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"trace file is not valid UTF-8 (byte offset {e.start})", path=p) from e
    lines = text.splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    if len(comments) < 3:
        raise FormatError("trace file lacks its three comment header rows", path=p, line=1)
    head = _comment_fields(comments[0])
    try:
        na, nb = head["names"].split(",")
        rate = float(head["rate"])
        frame = head["frame"]
        scores = {k: float(v) for k, v in {**_comment_fields(comments[1]), **_comment_fields(comments[2])}.items()}
    except (KeyError, ValueError) as e:
        raise FormatError(f"malformed trace header: {e}", path=p, line=1) from e
    df = read_table(io.StringIO(text), path=p, what="trace rows", comment="#", float_precision="round_trip")
    missing = [c for c in [f"{n}_{ax}" for n in (na, nb) for ax in AXES] if c not in df.columns]
    if missing:
        raise FormatError(f"trace file missing columns {missing}", path=p)

    def series(name: str) -> ImuSeries:
        data = df[[f"{name}_{ax}" for ax in AXES]].to_numpy(dtype=np.float64)
        return ImuSeries(frame_tag=frame, sample_rate=rate, accel=data[:, :3], gyro=data[:, 3:])  # type: ignore[arg-type]

    return TraceFile(names=(na, nb), a=series(na), b=series(nb), rmse=scores)
