# errors.py

from __future__ import annotations

from pathlib import Path
from typing import Sequence


class VirtImuError(Exception):
    """Base class for all virtimu errors."""
    exit_code: int = 1


class ConfigError(VirtImuError):
    """Raised for invalid parameters, flags, config files or unknown regions."""
    exit_code = 2


class FormatError(VirtImuError):
    """Raised when a file or text stream cannot be parsed or written."""
    exit_code = 3

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = str(path) if path is not None else None
        self.line = line


class InvariantViolation(FormatError):
    """Raised when loaded data breaks a named invariant (quaternion norm, triangle area, ...)."""

    def __init__(
        self,
        invariant: str,
        message: str,
        *,
        region: str | None = None,
        frame: int | None = None,
        path: str | Path | None = None,
    ):
        ctx = []
        if region is not None:
            ctx.append(f"region={region}")
        if frame is not None:
            ctx.append(f"frame={frame}")
        suffix = f" ({', '.join(ctx)})" if ctx else ""
        super().__init__(f"{invariant}: {message}{suffix}", path=path)
        self.invariant = invariant
        self.region = region
        self.frame = frame


class NumericalError(VirtImuError):
    """Raised on degenerate geometry, rotation aliasing, divergence or non-finite values."""
    exit_code = 4

    def __init__(self, message: str, frame: int | None = None, history: Sequence[float] | None = None):
        super().__init__(f"{message} (frame {frame})" if frame is not None else message)
        self.frame = frame
        self.history = list(history) if history is not None else []


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, VirtImuError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return FormatError.exit_code
    return 1
