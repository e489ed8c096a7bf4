from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from virtimu.errors import FormatError

MANIFEST_VERSION = 1

M = TypeVar("M", bound=BaseModel)


def to_jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    return obj


def canonical_json(payload: Any) -> bytes:
    return json.dumps(to_jsonable(payload), sort_keys=True, separators=(",", ":")).encode()


def fingerprint(payload: Any) -> str:
    """SHA-256 over the canonical JSON of payload."""
    return hashlib.sha256(canonical_json(payload)).hexdigest()


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_manifest(path: Path, payload: Dict[str, Any]) -> None:
    """Write a versioned JSON document; no timestamps, so identical inputs give identical bytes."""
    doc: Dict[str, Any] = {"version": MANIFEST_VERSION}
    doc.update(to_jsonable(payload))
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def read_manifest(path: Path, model: Type[M], *, kind: Optional[str] = None) -> M:
    """Load a JSON document and validate it against a pydantic model."""
    label = kind or model.__name__
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"{label} is not valid JSON: {e.msg}", path=path, line=e.lineno) from e
    except UnicodeDecodeError as e:
        raise FormatError(f"{label} is not valid UTF-8 (byte offset {e.start})", path=path) from e
    if not isinstance(raw, dict):
        raise FormatError(f"{label} must be a JSON object", path=path)
    version = raw.get("version")
    if version != MANIFEST_VERSION:
        raise FormatError(f"Unsupported {label} version {version!r} (expected {MANIFEST_VERSION})", path=path)
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first.get("loc", ()))
        raise FormatError(f"Invalid {label}: {loc}: {first.get('msg')}", path=path) from e
