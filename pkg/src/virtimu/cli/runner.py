from __future__ import annotations

import argparse
import logging
from typing import Any, Callable, Dict

from virtimu.errors import VirtImuError, exit_code_for
from virtimu.motion_io.manifest import to_jsonable

logger = logging.getLogger(__name__)


def run_command(name: str, fn: Callable[[argparse.Namespace], Any], args: argparse.Namespace) -> Dict[str, Any]:
    """Run one subcommand and wrap its outcome as a JSON-able summary with an exit code."""
    try:
        result = fn(args)
        return {"command": name, "ok": True, "exit_code": 0, "result": to_jsonable(result)}
    except VirtImuError as e:
        return {"command": name, "ok": False, "exit_code": e.exit_code, "error": {"type": e.__class__.__name__, "message": str(e)}}
    except OSError as e:
        return {"command": name, "ok": False, "exit_code": exit_code_for(e), "error": {"type": e.__class__.__name__, "message": str(e)}}
    except Exception as e:
        logger.exception("Unexpected failure in %s", name)
        return {"command": name, "ok": False, "exit_code": exit_code_for(e), "error": {"type": e.__class__.__name__, "message": str(e)}}
