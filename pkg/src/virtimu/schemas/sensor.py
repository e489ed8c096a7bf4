from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class RotationEntry(BaseModel):
    quat: Optional[List[float]] = Field(default=None, min_length=4, max_length=4)  # w, x, y, z
    matrix: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "RotationEntry":
        if (self.quat is None) == (self.matrix is None):
            raise ValueError("rotation needs exactly one of 'quat' or 'matrix'")
        if self.matrix is not None and (len(self.matrix) != 3 or any(len(r) != 3 for r in self.matrix)):
            raise ValueError("rotation.matrix must be 3x3")
        return self


class SensorSpecDoc(BaseModel):
    version: Literal[1]
    region: str = Field(min_length=1)
    rotation: RotationEntry
    gravity: Optional[List[float]] = Field(default=None, min_length=3, max_length=3)
    sample_rate: float = Field(gt=0)
