from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, Field


class HarExportMeta(BaseModel):
    version: int = 1
    sample_rate: float = Field(gt=0)
    window_sec: float = Field(gt=0)
    overlap: float = Field(ge=0, lt=1)
    window_length: int = Field(ge=1)
    hop: int = Field(ge=1)
    windows: int = Field(ge=0)
    subject: Optional[str] = None
    channels: List[str]
    cutoff_hz: Optional[float] = None
    mapping: str = "skipped"  # applied | skipped
    map_scope: Optional[str] = None
    labels: str = "provided"  # provided | none
    zero_variance_channels: List[str] = []
