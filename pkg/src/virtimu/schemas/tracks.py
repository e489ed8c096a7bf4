from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class RegionEntry(BaseModel):
    # Three triangles, vertex ids in counter-clockwise (outward-normal) order
    triangles: List[List[int]] = Field(min_length=3, max_length=3)

    @field_validator("triangles")
    @classmethod
    def _three_vertices(cls, v: List[List[int]]) -> List[List[int]]:
        for tri in v:
            if len(tri) != 3:
                raise ValueError("each triangle lists exactly 3 vertex ids")
        return v


class TrackManifest(BaseModel):
    version: Literal[1]
    sample_rate: float = Field(gt=0)
    frames: Optional[int] = Field(default=None, ge=0)
    regions: Dict[str, RegionEntry]
    has_confidence: bool = False
