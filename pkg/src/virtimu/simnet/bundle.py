"""WeightBundle persistence: `<stem>.weights.json` manifest + `<stem>.weights.bin` float64 blob."""

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from virtimu.errors import ConfigError, FormatError
from virtimu.motion_io.manifest import fingerprint, read_manifest, sha256_bytes, write_manifest
from virtimu.schemas import WeightsManifest
from virtimu.simnet.config import NetworkConfig
from virtimu.simnet.network import Params, init_params, param_shapes, zero_params

logger = logging.getLogger(__name__)

KINDS = ("accel", "gyro")
BLOB_DTYPE = "<f8"


@dataclass(eq=False)
class WeightBundle:
    config: NetworkConfig
    params: Params
    seed: int = 0
    kind: str = "accel"
    input_mean: np.ndarray = field(default_factory=lambda: np.zeros(0))
    input_std: np.ndarray = field(default_factory=lambda: np.zeros(0))
    train: Optional[Dict[str, Any]] = None
    epochs_run: int = 0

    def __post_init__(self) -> None:
        d = self.config.input_dim
        if self.input_mean.size == 0:
            self.input_mean = np.zeros(d)
        if self.input_std.size == 0:
            self.input_std = np.ones(d)

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.input_mean) / self.input_std

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"weights kind must be one of {KINDS}, got {self.kind!r}")
        shapes = param_shapes(self.config)
        if list(self.params) != list(shapes):
            raise FormatError(f"parameter names/order differ from the network layout: {list(self.params)[:3]}...")
        for name, shape in shapes.items():
            if self.params[name].shape != shape:
                raise FormatError(f"parameter {name} shaped {self.params[name].shape}, expected {shape}")
            if not np.all(np.isfinite(self.params[name])):
                raise FormatError(f"parameter {name} contains non-finite values")
        d = self.config.input_dim
        if self.input_mean.shape != (d,) or self.input_std.shape != (d,) or np.any(self.input_std <= 0):
            raise FormatError("input standardization stats must be finite, length input_dim, std > 0")

    def copy(self) -> "WeightBundle":
        return WeightBundle(
            config=self.config,
            params=OrderedDict((k, v.copy()) for k, v in self.params.items()),
            seed=self.seed,
            kind=self.kind,
            input_mean=self.input_mean.copy(),
            input_std=self.input_std.copy(),
            train=dict(self.train) if self.train is not None else None,
            epochs_run=self.epochs_run,
        )


def init_weights(cfg: NetworkConfig, seed: int, *, kind: str = "accel") -> WeightBundle:
    return WeightBundle(config=cfg, params=init_params(cfg, seed), seed=seed, kind=kind)


def zero_weights(cfg: NetworkConfig, *, kind: str = "accel") -> WeightBundle:
    return WeightBundle(config=cfg, params=zero_params(cfg), seed=0, kind=kind)


def bundle_paths(path: str | Path) -> Tuple[Path, Path]:
    p = Path(path)
    name = p.name
    for suffix in (".weights.json", ".weights.bin"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    return p.with_name(f"{name}.weights.json"), p.with_name(f"{name}.weights.bin")


def config_fingerprint(bundle: WeightBundle) -> str:
    return fingerprint({"kind": bundle.kind, "seed": bundle.seed, "config": bundle.config.to_dict(), "train": bundle.train})


def save_bundle(bundle: WeightBundle, path: str | Path) -> Tuple[Path, Path]:
    """Write manifest and blob; identical bundles always produce identical bytes."""
    bundle.validate()
    json_path, bin_path = bundle_paths(path)
    blob = b"".join(np.ascontiguousarray(v, dtype=BLOB_DTYPE).tobytes() for v in bundle.params.values())
    bin_path.write_bytes(blob)
    write_manifest(
        json_path,
        {
            "kind": bundle.kind,
            "dtype": BLOB_DTYPE,
            "blob": bin_path.name,
            "blob_sha256": sha256_bytes(blob),
            "seed": int(bundle.seed),
            "config": bundle.config.to_dict(),
            "fingerprint": config_fingerprint(bundle),
            "parameters": [{"name": k, "shape": list(v.shape)} for k, v in bundle.params.items()],
            "input_mean": [float(v) for v in bundle.input_mean],
            "input_std": [float(v) for v in bundle.input_std],
            "train": bundle.train,
            "epochs_run": int(bundle.epochs_run),
        },
    )
    logger.info("Saved %s weights to %s (%d bytes)", bundle.kind, json_path, len(blob))
    return json_path, bin_path


def load_bundle(path: str | Path) -> WeightBundle:
    """Read a bundle written by save_bundle.

    Raises:
        FormatError: bad manifest, blob size or checksum mismatch, layout mismatch.
    """
    json_path, _ = bundle_paths(path)
    doc = read_manifest(json_path, WeightsManifest, kind="weights manifest")
    try:
        cfg = NetworkConfig.from_dict(doc.config)
    except (ConfigError, TypeError, ValueError) as e:
        raise FormatError(f"Invalid network config echo: {e}", path=json_path) from e
    bin_path = json_path.with_name(doc.blob)
    blob = bin_path.read_bytes()
    if sha256_bytes(blob) != doc.blob_sha256:
        raise FormatError("Weights blob checksum mismatch", path=bin_path)

    expected = param_shapes(cfg)
    listed = [(p.name, tuple(p.shape)) for p in doc.parameters]
    if listed != list(expected.items()):
        raise FormatError("Manifest parameter list does not match the configured network layout", path=json_path)
    total = sum(int(np.prod(s)) for _, s in listed)
    if len(blob) != total * 8:
        raise FormatError(f"Weights blob holds {len(blob)} bytes, expected {total * 8}", path=bin_path)
    flat = np.frombuffer(blob, dtype=BLOB_DTYPE).astype(np.float64)
    params: Params = OrderedDict()
    offset = 0
    for name, shape in listed:
        size = int(np.prod(shape))
        params[name] = flat[offset : offset + size].reshape(shape).copy()
        offset += size

    bundle = WeightBundle(
        config=cfg,
        params=params,
        seed=doc.seed,
        kind=doc.kind,
        input_mean=np.asarray(doc.input_mean, dtype=np.float64),
        input_std=np.asarray(doc.input_std, dtype=np.float64),
        train=doc.train,
        epochs_run=doc.epochs_run,
    )
    try:
        bundle.validate()
    except (ConfigError, FormatError) as e:
        raise FormatError(str(e), path=json_path) from e
    if config_fingerprint(bundle) != doc.fingerprint:
        raise FormatError("Config fingerprint mismatch (manifest edited by hand?)", path=json_path)
    return bundle


@dataclass(eq=False)
class SimulatorWeights:
    """The accelerometer and gyroscope networks used together for one sensor."""

    accel: WeightBundle
    gyro: WeightBundle

    def validate(self) -> None:
        self.accel.validate()
        self.gyro.validate()
        if self.accel.config.with_orientation != self.gyro.config.with_orientation:
            raise ConfigError("accel and gyro networks disagree on input layout")


def load_simulator(directory: str | Path) -> SimulatorWeights:
    d = Path(directory)
    if not d.is_dir():
        raise ConfigError(f"--weights must be a directory holding accel/gyro bundles: {d}")
    weights = SimulatorWeights(accel=load_bundle(d / "accel"), gyro=load_bundle(d / "gyro"))
    weights.validate()
    return weights


def save_simulator(weights: SimulatorWeights, directory: str | Path) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    save_bundle(weights.accel, d / "accel")
    save_bundle(weights.gyro, d / "gyro")
