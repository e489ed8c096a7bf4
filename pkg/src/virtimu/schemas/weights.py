from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class ParameterEntry(BaseModel):
    name: str
    shape: List[int]


class WeightsManifest(BaseModel):
    version: Literal[1]
    kind: str = "accel"  # accel | gyro
    dtype: Literal["<f8"] = "<f8"
    blob: str
    blob_sha256: str
    seed: int
    config: Dict[str, Any]
    fingerprint: str
    parameters: List[ParameterEntry]
    input_mean: List[float]
    input_std: List[float]
    train: Optional[Dict[str, Any]] = None
    epochs_run: int = Field(default=0, ge=0)
