from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from virtimu.errors import ConfigError
from virtimu.evalkit.splits import PROTOCOLS

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["method", "modality", "accel_rmse", "gyro_rmse"]


@dataclass
class ResultRow:
    method: str
    modality: str
    accel_rmse: float
    gyro_rmse: float


@dataclass
class FoldScores:
    fold: str  # held-out subject
    scores: Dict[str, float]  # protocol -> macro F1


def results_table(rows: Sequence[ResultRow], path: str | Path) -> Path:
    """Fidelity table: one row per method, sorted by method name, RMSE to 6 decimals."""
    if not rows:
        raise ConfigError("results_table needs at least one row")
    ordered = sorted(rows, key=lambda r: r.method)
    df = pd.DataFrame(
        [[r.method, r.modality, f"{r.accel_rmse:.6f}", f"{r.gyro_rmse:.6f}"] for r in ordered],
        columns=RESULT_COLUMNS,
    )
    p = Path(path)
    df.to_csv(p, index=False, lineterminator="\n")
    return p


def f1_report(folds: Sequence[FoldScores], path: str | Path, protocols: Sequence[str] = PROTOCOLS) -> Path:
    """Per-fold macro F1 per protocol plus a final mean±std row (population std)."""
    if not folds:
        raise ConfigError("f1_report needs at least one fold")
    unknown = [p for p in protocols if p not in PROTOCOLS]
    if unknown:
        raise ConfigError(f"unknown protocols {unknown}")
    rows: List[List[str]] = []
    for f in folds:
        rows.append([str(f.fold)] + [f"{f.scores[p]:.4f}" if p in f.scores else "" for p in protocols])
    summary = ["mean±std"]
    for p in protocols:
        vals = np.array([f.scores[p] for f in folds if p in f.scores], dtype=np.float64)
        summary.append(f"{vals.mean():.4f}±{vals.std():.4f}" if vals.size else "")
    rows.append(summary)
    out = Path(path)
    pd.DataFrame(rows, columns=["fold", *protocols]).to_csv(out, index=False, lineterminator="\n")
    logger.info("Wrote F1 report for %d folds to %s", len(folds), out)
    return out
