from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional

from virtimu import FORMAT_VERSIONS, __version__
from virtimu.cli import commands
from virtimu.cli.runner import run_command

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, Callable[[argparse.Namespace], object]] = {
    "simulate": commands.cmd_simulate,
    "train": commands.cmd_train,
    "eval": commands.cmd_eval,
    "export-har": commands.cmd_export_har,
    "condition": commands.cmd_condition,
    "f1": commands.cmd_f1,
}


def configure_logging(level: Optional[str] = None) -> None:
    log_level = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    logging.basicConfig(
        level=getattr(logging, log_level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def _version_text() -> str:
    formats = ", ".join(f"{k}=v{v}" for k, v in FORMAT_VERSIONS.items())
    return f"virtimu {__version__} (formats: {formats})"


def _add_gravity(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gravity-magnitude", type=float, default=None, help="m/s^2 (default 9.80665)")
    p.add_argument("--gravity-sign", type=float, choices=(1.0, -1.0), default=None, help="+1 adds g before rotating, -1 subtracts")


def _add_window(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=float, default=None, help="window length in seconds")
    p.add_argument("--overlap", type=float, default=None, help="fractional overlap in [0, 1)")
    p.add_argument("--workers", type=int, default=None, help="threads for per-window prediction")


def _add_conditioning(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=float, default=None, help="confidence gate in [0, 1]")
    p.add_argument("--interpolation", choices=("linear", "cubic", "auto"), default=None)
    p.add_argument("--max-cubic-gap", type=float, default=None, help="longest gap (s) filled by cubic spline in auto mode")
    p.add_argument("--process-noise", type=float, default=None)
    p.add_argument("--measurement-noise", type=float, default=None)
    p.add_argument("--initial-variance", type=float, default=None)
    p.add_argument("--no-smooth", dest="smooth", action="store_false", default=None, help="skip the Kalman/RTS pass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="virtimu", description="Virtual IMU simulation from motion tracks")
    parser.add_argument("--version", action="version", version=_version_text())
    parser.add_argument("--config", default=None, help="YAML config file (default: $VIRTIMU_CONFIG or configs/<profile>.yaml)")
    parser.add_argument("--profile", default="default")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR (default $LOG_LEVEL or INFO)")
    parser.add_argument("--json", action="store_true", help="print a JSON summary on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate sensor-frame IMU for one region")
    p.add_argument("--tracks", required=True, help="track set CSV (manifest next to it)")
    p.add_argument("--sensor", required=True, help="sensor spec JSON")
    p.add_argument("--mode", choices=("analytic", "learned"), default="analytic")
    p.add_argument("--weights", default=None, help="directory with accel/ and gyro/ bundles")
    p.add_argument("--out", required=True, help="output IMU CSV")
    p.add_argument("--emit-global", action="store_true", help="also write <out>.global.csv")
    p.add_argument("--condition", action="store_true", help="condition the track set before simulating")
    _add_gravity(p)
    _add_window(p)
    _add_conditioning(p)

    p = sub.add_parser("train", help="train the accel and gyro networks")
    p.add_argument("--tracks", action="append", required=True, help="repeatable; one per recording")
    p.add_argument("--sensor", action="append", required=True, help="repeatable, or once for all recordings")
    p.add_argument("--gt", action="append", required=True, help="ground-truth IMU CSV, repeatable")
    p.add_argument("--out", required=True, help="output weights directory")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default=None)
    p.add_argument("--trainable", default=None, help="comma-separated parameter prefixes to update")
    p.add_argument("--conv-channels", default=None, help="e.g. 64,64,64")
    p.add_argument("--kernel-size", type=int, default=None)
    p.add_argument("--hidden-size", type=int, default=None)
    p.add_argument("--with-orientation", action="store_true", default=None, help="append segment orientation to the input")
    p.add_argument("--augment", type=int, default=0, help="random rotations about gravity per recording")
    _add_gravity(p)
    _add_window(p)

    p = sub.add_parser("eval", help="score simulated IMU against ground truth")
    p.add_argument("--tracks", required=True)
    p.add_argument("--sensor", required=True)
    p.add_argument("--gt", required=True, help="ground-truth IMU CSV")
    p.add_argument("--weights", default=None, help="adds a 'learned' row")
    p.add_argument("--bvh", default=None, help="adds a 'skeleton' row (requires --joint)")
    p.add_argument("--joint", default=None)
    p.add_argument("--bvh-scale", type=float, default=1.0, help="multiply BVH lengths (e.g. 0.01 for cm)")
    p.add_argument("--modality", default="mesh")
    p.add_argument("--filter", action="store_true", help="low-pass every series before scoring")
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--out", required=True, help="output directory")
    _add_gravity(p)
    _add_window(p)

    p = sub.add_parser("export-har", help="filter, normalize, map and window an IMU series for HAR")
    p.add_argument("--imu", required=True)
    p.add_argument("--labels", default=None, help="CSV with one integer 'label' per sample")
    p.add_argument("--reference", default=None, help="real IMU CSV for distribution mapping")
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--window", dest="har_window", type=float, default=None)
    p.add_argument("--overlap", dest="har_overlap", type=float, default=None)
    p.add_argument("--map-scope", choices=("recording", "channel", "global"), default=None)
    p.add_argument("--subject", default=None)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("condition", help="gate, fill and smooth a root trajectory CSV")
    p.add_argument("--input", required=True, help="CSV with x, y, z, conf (and optionally t)")
    p.add_argument("--rate", type=float, default=None)
    p.add_argument("--known-length", type=float, default=None)
    p.add_argument("--estimated-length", type=float, default=None)
    p.add_argument("--out", required=True)
    _add_conditioning(p)

    p = sub.add_parser("f1", help="macro F1 per fold and protocol")
    p.add_argument("--scores", required=True, help="directory of <fold>_<protocol>.csv files")
    p.add_argument("--out", required=True)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        from dotenv import load_dotenv

        load_dotenv()
    except ImportError:
        pass

    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    summary = run_command(args.command, COMMANDS[args.command], args)
    if args.json:
        print(json.dumps(summary, indent=2))
    elif not summary["ok"]:
        err = summary["error"]
        print(f"virtimu {args.command}: {err['type']}: {err['message']}", file=sys.stderr)
    else:
        for path in summary["result"].get("outputs", []):
            print(path)
    return int(summary["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
