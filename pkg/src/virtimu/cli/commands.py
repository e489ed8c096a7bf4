"""Subcommand implementations.

Each command loads and validates every input and computes its results before the
first output file is created.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

from virtimu.core.config import PipelineConfig, apply_overrides, load_config
from virtimu.core.types import ImuSeries, MotionTrackSet, SensorSpec
from virtimu.core.windowing import window_geometry
from virtimu.errors import ConfigError, FormatError
from virtimu.evalkit import FoldScores, ResultRow, compare_traces, f1_report, macro_f1, results_table, rmse, simulate_skeleton
from virtimu.evalkit.splits import PROTOCOLS
from virtimu.kinematics import from_sensor_frame, random_rotation_augment, simulate_analytic, to_sensor_frame
from virtimu.motion_io import load_bvh, load_sensor_spec, load_track_set, read_imu_csv, write_imu_csv
from virtimu.motion_io.tables import read_table
from virtimu.postprocess import IMU_CHANNELS, export_har, har_windows, lowpass, map_recordings, normalize, window_labels
from virtimu.schemas import HarExportMeta
from virtimu.simnet import SimulatorWeights, build_windows, concat_windows, feature_stats, load_simulator, region_features, save_simulator, train
from virtimu.simnet.config import TrainConfig
from virtimu.simnet.predict import simulate_learned
from virtimu.trajectory import condition_root_trajectory, condition_track_set

logger = logging.getLogger(__name__)

# argparse dest -> dotted config key
FLAG_KEYS = {
    "threshold": "trajectory.threshold",
    "interpolation": "trajectory.interpolation",
    "max_cubic_gap": "trajectory.max_cubic_gap_s",
    "process_noise": "trajectory.process_noise",
    "measurement_noise": "trajectory.measurement_noise",
    "initial_variance": "trajectory.initial_variance",
    "smooth": "trajectory.smooth",
    "gravity_magnitude": "kinematics.gravity_magnitude",
    "gravity_sign": "kinematics.gravity_sign",
    "conv_channels": "network.conv_channels",
    "kernel_size": "network.kernel_size",
    "hidden_size": "network.hidden_size",
    "with_orientation": "network.with_orientation",
    "window": "train.window_sec",
    "overlap": "train.overlap",
    "batch_size": "train.batch_size",
    "epochs": "train.epochs",
    "lr": "train.learning_rate",
    "optimizer": "train.optimizer",
    "seed": "train.seed",
    "trainable": "train.trainable",
    "workers": "train.workers",
    "cutoff": "postprocess.cutoff_hz",
    "har_window": "postprocess.har_window_sec",
    "har_overlap": "postprocess.har_overlap",
    "map_scope": "postprocess.map_scope",
}


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """defaults < YAML (--config / $VIRTIMU_CONFIG / configs/<profile>.yaml) < env < flags."""
    cfg = load_config(getattr(args, "config", None), getattr(args, "profile", "default"))
    flags = {key: getattr(args, dest) for dest, key in FLAG_KEYS.items() if hasattr(args, dest)}
    cfg = apply_overrides(cfg, flags)
    cfg.validate()
    return cfg


def _sibling(path: Path, suffix: str) -> Path:
    stem = path.name[: -len(".csv")] if path.name.endswith(".csv") else path.name
    return path.with_name(stem + suffix)


def _prediction_config(cfg: PipelineConfig, weights: SimulatorWeights, args: argparse.Namespace) -> TrainConfig:
    """Predict with the training window geometry unless --window/--overlap say otherwise."""
    record = weights.accel.train or {}
    updates: Dict[str, Any] = {}
    if getattr(args, "window", None) is None and "window_sec" in record:
        updates["window_sec"] = float(record["window_sec"])
    if getattr(args, "overlap", None) is None and "overlap" in record:
        updates["overlap"] = float(record["overlap"])
    return dataclasses.replace(cfg.train, **updates)


def _load_sensor_inputs(args: argparse.Namespace, cfg: PipelineConfig) -> Tuple[MotionTrackSet, SensorSpec]:
    tracks = load_track_set(args.tracks)
    spec = load_sensor_spec(args.sensor, gravity_magnitude=cfg.kinematics.gravity_magnitude)
    tracks.region(spec.region)
    return tracks, spec


def _sensor_frame(gt: ImuSeries, tracks: MotionTrackSet, spec: SensorSpec, cfg: PipelineConfig) -> ImuSeries:
    if gt.frame_tag == "sensor":
        return gt
    reg = tracks.region(spec.region)
    if len(gt) != reg.frame_count:
        raise ConfigError(f"global-frame ground truth has {len(gt)} samples, track {reg.frame_count}")
    return to_sensor_frame(gt.accel, gt.gyro, reg.orientation, spec, gravity_sign=cfg.kinematics.gravity_sign, sample_rate=gt.sample_rate)


# ---------- simulate ----------

def cmd_simulate(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = resolve_config(args)
    tracks, spec = _load_sensor_inputs(args, cfg)
    if args.condition:
        tracks = condition_track_set(tracks, cfg.trajectory)
    if args.mode == "learned":
        if not args.weights:
            raise ConfigError("--mode learned requires --weights DIR")
        weights = load_simulator(args.weights)
        sensor, glob = simulate_learned(weights, tracks, spec, cfg.kinematics, _prediction_config(cfg, weights, args))
    else:
        sensor, glob = simulate_analytic(tracks, spec, cfg.kinematics)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_imu_csv(sensor, out)
    outputs = [out]
    if args.emit_global:
        gpath = _sibling(out, ".global.csv")
        write_imu_csv(glob, gpath)
        outputs.append(gpath)
    logger.info("Simulated %d samples (%s) for region %s", len(sensor), args.mode, spec.region)
    return {"mode": args.mode, "region": spec.region, "samples": len(sensor), "outputs": outputs}


# ---------- train ----------

def _broadcast(values: List[str], n: int, flag: str) -> List[str]:
    if len(values) == n:
        return values
    if len(values) == 1:
        return values * n
    raise ConfigError(f"{flag} given {len(values)} times for {n} recordings")


def cmd_train(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = resolve_config(args)
    n = len(args.tracks)
    sensors = _broadcast(args.sensor, n, "--sensor")
    gts = _broadcast(args.gt, n, "--gt")
    if args.augment < 0:
        raise ConfigError("--augment must be >= 0")
    with_orientation = cfg.network.with_orientation
    rng = np.random.default_rng(cfg.train.seed)

    recordings: List[Tuple[MotionTrackSet, str, ImuSeries]] = []
    for tpath, spath, gpath in zip(args.tracks, sensors, gts):
        tracks = load_track_set(tpath)
        spec = load_sensor_spec(spath, gravity_magnitude=cfg.kinematics.gravity_magnitude)
        tracks.region(spec.region)
        gt = read_imu_csv(gpath)
        if gt.sample_rate != tracks.sample_rate or len(gt) != tracks.frame_count:
            raise ConfigError(f"{gpath}: ground truth ({len(gt)} @ {gt.sample_rate} Hz) does not match {tpath} ({tracks.frame_count} @ {tracks.sample_rate} Hz)")
        cfg.train.validate(tracks.sample_rate)
        sensor_gt = _sensor_frame(gt, tracks, spec, cfg)
        variants = [tracks] + [random_rotation_augment(tracks, rng, gravity=spec.gravity) for _ in range(args.augment)]
        for v in variants:
            a_g, w_g = from_sensor_frame(sensor_gt, v.region(spec.region).orientation, spec, gravity_sign=cfg.kinematics.gravity_sign)
            recordings.append((v, spec.region, ImuSeries(frame_tag="global", sample_rate=v.sample_rate, accel=a_g, gyro=w_g)))

    stats = feature_stats([region_features(t, r, with_orientation=with_orientation) for t, r, _ in recordings])
    windows = {
        kind: concat_windows(
            [build_windows(t, r, g, cfg.train, kind=kind, with_orientation=with_orientation, stats=stats) for t, r, g in recordings]
        )
        for kind in ("accel", "gyro")
    }
    accel, accel_hist = train(windows["accel"], cfg.train, cfg.network, kind="accel")
    gyro_cfg = dataclasses.replace(cfg.train, seed=cfg.train.seed + 1)
    gyro, gyro_hist = train(windows["gyro"], gyro_cfg, cfg.network, kind="gyro")

    out = Path(args.out)
    save_simulator(SimulatorWeights(accel=accel, gyro=gyro), out)
    history = pd.DataFrame({"epoch": np.arange(1, len(accel_hist) + 1), "accel_loss": accel_hist, "gyro_loss": gyro_hist})
    history.to_csv(out / "loss_history.csv", index=False, float_format="%.17g", lineterminator="\n")
    return {
        "windows": len(windows["accel"]),
        "epochs": len(accel_hist),
        "final_loss": {"accel": accel_hist[-1] if accel_hist else None, "gyro": gyro_hist[-1] if gyro_hist else None},
        "outputs": [out],
    }


# ---------- eval ----------

def cmd_eval(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = resolve_config(args)
    if (args.bvh is None) != (args.joint is None):
        raise ConfigError("--bvh and --joint must be given together")
    tracks, spec = _load_sensor_inputs(args, cfg)
    gt = _sensor_frame(read_imu_csv(args.gt), tracks, spec, cfg)
    weights = load_simulator(args.weights) if args.weights else None
    anim = load_bvh(args.bvh, scale=args.bvh_scale) if args.bvh else None

    sims: Dict[str, ImuSeries] = {"analytic": simulate_analytic(tracks, spec, cfg.kinematics)[0]}
    if weights is not None:
        sims["learned"] = simulate_learned(weights, tracks, spec, cfg.kinematics, _prediction_config(cfg, weights, args))[0]
    if anim is not None:
        sims["skeleton"] = simulate_skeleton(anim, args.joint, spec, cfg.kinematics)[0]

    if args.filter:
        def _filtered(s: ImuSeries) -> ImuSeries:
            data = lowpass(s.stacked(), s.sample_rate, cfg.postprocess.cutoff_hz)
            return ImuSeries(frame_tag=s.frame_tag, sample_rate=s.sample_rate, accel=data[:, :3], gyro=data[:, 3:], boundary=s.boundary)

        gt = _filtered(gt)
        sims = {m: _filtered(s) for m, s in sims.items()}

    # every method is scored on the same samples: those no simulator flagged as boundary
    keep = np.ones(len(gt), dtype=bool)
    for s in sims.values():
        if len(s) == len(gt):
            keep &= s.interior()
    logger.debug("Scoring %d of %d samples (%d boundary samples excluded)", int(keep.sum()), len(gt), int((~keep).sum()))
    rows = [ResultRow(m, args.modality, *rmse(s, gt, mask=keep)) for m, s in sims.items()]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = [results_table(rows, out / "results.csv")]
    for method, s in sims.items():
        outputs.append(compare_traces(s, gt, out / f"traces_{method}.csv", names=(method, "gt")))
    for r in sorted(rows, key=lambda r: r.method):
        logger.info("%s: accel RMSE %.6f m/s^2, gyro RMSE %.6f rad/s", r.method, r.accel_rmse, r.gyro_rmse)
    return {"rows": rows, "outputs": outputs}


# ---------- export-har ----------

def _read_labels(path: str, n: int) -> np.ndarray:
    df = read_table(path, what="labels file")
    if "label" not in df.columns:
        raise FormatError("labels file needs a 'label' column", path=path, line=1)
    if len(df) != n:
        raise ConfigError(f"{len(df)} labels for {n} IMU samples")
    if df["label"].isna().any() or not pd.api.types.is_integer_dtype(df["label"]):
        raise FormatError("labels must be integers, one per IMU sample", path=path)
    return df["label"].to_numpy(dtype=np.int64)


def cmd_export_har(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = resolve_config(args)
    pp = cfg.postprocess
    imu = read_imu_csv(args.imu)
    labels = _read_labels(args.labels, len(imu)) if args.labels else None
    reference = read_imu_csv(args.reference) if args.reference else None

    data = lowpass(imu.stacked(), imu.sample_rate, pp.cutoff_hz)
    data, stats = normalize(data)
    if reference is not None:
        ref, _ = normalize(lowpass(reference.stacked(), reference.sample_rate, pp.cutoff_hz))
        data = map_recordings([data], [ref], pp.map_scope)[0]
    windows, starts = har_windows(data, imu.sample_rate, pp.har_window_sec, pp.har_overlap)
    length, hop = window_geometry(imu.sample_rate, pp.har_window_sec, pp.har_overlap)
    y = window_labels(labels, starts, length) if labels is not None else None

    meta = HarExportMeta(
        sample_rate=imu.sample_rate,
        window_sec=pp.har_window_sec,
        overlap=pp.har_overlap,
        window_length=length,
        hop=hop,
        windows=len(starts),
        subject=args.subject,
        channels=list(IMU_CHANNELS),
        cutoff_hz=pp.cutoff_hz,
        mapping="applied" if reference is not None else "skipped",
        map_scope=pp.map_scope if reference is not None else None,
        labels="provided" if labels is not None else "none",
        zero_variance_channels=[IMU_CHANNELS[i] for i in np.flatnonzero(stats.zero_variance)],
    )
    out = export_har(windows, y, args.out, meta)
    return {"windows": len(starts), "outputs": [out]}


# ---------- condition ----------

def cmd_condition(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = resolve_config(args)
    src = Path(args.input)
    df = read_table(src, what="root trajectory", comment="#", float_precision="round_trip")
    missing = [c for c in ("x", "y", "z", "conf") if c not in df.columns]
    if missing:
        raise FormatError(f"root trajectory CSV missing columns {missing}", path=src, line=1)
    rate = args.rate
    if rate is None:
        if "t" not in df.columns or len(df) < 2:
            raise ConfigError("--rate is required when the input has no 't' column")
        rate = float(1.0 / np.median(np.diff(df["t"].to_numpy(dtype=np.float64))))
    positions = df[["x", "y", "z"]].to_numpy(dtype=np.float64)
    confidence = df["conf"].to_numpy(dtype=np.float64)
    out_xyz = condition_root_trajectory(
        positions, confidence, rate, cfg.trajectory, known_length=args.known_length, estimated_length=args.estimated_length
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    n = out_xyz.shape[0]
    pd.DataFrame({"frame": np.arange(n), "t": np.arange(n) / rate, "x": out_xyz[:, 0], "y": out_xyz[:, 1], "z": out_xyz[:, 2]}).to_csv(
        out, index=False, float_format="%.17g", lineterminator="\n"
    )
    return {"frames": n, "rate": rate, "outputs": [out]}


# ---------- f1 ----------

def cmd_f1(args: argparse.Namespace) -> Dict[str, Any]:
    """Score `<fold>_<protocol>.csv` files (columns label, prediction) into an F1 report."""
    resolve_config(args)
    src = Path(args.scores)
    if not src.is_dir():
        raise ConfigError(f"--scores must be a directory: {src}")
    by_fold: Dict[str, Dict[str, float]] = defaultdict(dict)
    for path in sorted(src.glob("*.csv")):
        fold, _, protocol = path.stem.rpartition("_")
        if protocol not in PROTOCOLS or not fold:
            logger.warning("Skipping %s (expected <fold>_<R2R|V2R|Mix2R>.csv)", path.name)
            continue
        df = read_table(path, what="prediction file")
        if not {"label", "prediction"} <= set(df.columns):
            raise FormatError("prediction file needs 'label' and 'prediction' columns", path=path, line=1)
        by_fold[fold][protocol] = macro_f1(df["prediction"].to_numpy(), df["label"].to_numpy())
    if not by_fold:
        raise ConfigError(f"no <fold>_<protocol>.csv files in {src}")
    folds = [FoldScores(fold=f, scores=s) for f, s in sorted(by_fold.items())]
    out = f1_report(folds, args.out)
    return {"folds": len(folds), "outputs": [out]}
