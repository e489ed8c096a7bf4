"""Plain CSV tables (labels, predictions, root trajectories) read through pandas."""

from __future__ import annotations

from pathlib import Path
from typing import Any, TextIO, Union

import pandas as pd

from virtimu.errors import FormatError

Source = Union[str, Path, TextIO]


def read_table(source: Source, *, path: str | Path | None = None, what: str = "table", **kwargs: Any) -> pd.DataFrame:
    """pd.read_csv that reports undecodable or malformed input as FormatError.

    `path` names the file in the error when `source` is an open stream.
    """
    where = path if path is not None else (source if isinstance(source, (str, Path)) else None)
    try:
        return pd.read_csv(source, **kwargs)
    except UnicodeDecodeError as e:
        raise FormatError(f"{what} is not valid UTF-8 (byte offset {e.start})", path=where) from e
    except pd.errors.EmptyDataError as e:
        raise FormatError(f"{what} is empty", path=where) from e
    except pd.errors.ParserError as e:
        raise FormatError(f"Cannot parse {what}: {e}", path=where) from e
