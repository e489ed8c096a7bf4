# config.py

from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from virtimu.core.types import STANDARD_GRAVITY
from virtimu.errors import ConfigError
from virtimu.simnet.config import NetworkConfig, TrainConfig

logger = logging.getLogger(__name__)


# Root-trajectory conditioning (used by virtimu.trajectory)
@dataclass(frozen=True)
class TrajectoryConfig:
    # Confidence gating
    threshold: float = 0.5

    # Gap filling: linear | cubic | auto (cubic for interior gaps up to max_cubic_gap_s)
    interpolation: str = "auto"
    max_cubic_gap_s: float = 0.5

    # Constant-velocity Kalman + RTS smoother
    process_noise: float = 1.0  # (m/s^2)^2
    measurement_noise: float = 0.01  # m^2
    initial_variance: float = 10.0  # m^2
    smooth: bool = True


@dataclass(frozen=True)
class KinematicsConfig:
    gravity_magnitude: float = STANDARD_GRAVITY
    # +1 adds g before rotating into the sensor frame, -1 subtracts it
    gravity_sign: float = 1.0


@dataclass(frozen=True)
class PostprocessConfig:
    cutoff_hz: float = 10.0
    har_window_sec: float = 1.0
    har_overlap: float = 0.5
    map_scope: str = "recording"  # recording | channel | global


@dataclass(frozen=True)
class PipelineConfig:
    profile: str = "default"
    trajectory: TrajectoryConfig = field(default_factory=TrajectoryConfig)
    kinematics: KinematicsConfig = field(default_factory=KinematicsConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    postprocess: PostprocessConfig = field(default_factory=PostprocessConfig)

    def validate(self) -> None:
        t = self.trajectory
        if not 0.0 <= t.threshold <= 1.0:
            raise ConfigError(f"trajectory.threshold must be in [0, 1], got {t.threshold}")
        if t.interpolation not in ("linear", "cubic", "auto"):
            raise ConfigError(f"trajectory.interpolation must be linear, cubic or auto, got {t.interpolation!r}")
        if min(t.process_noise, t.measurement_noise, t.initial_variance) <= 0:
            raise ConfigError("Kalman noise parameters must be > 0")
        if self.kinematics.gravity_sign not in (1.0, -1.0):
            raise ConfigError(f"kinematics.gravity_sign must be +1 or -1, got {self.kinematics.gravity_sign}")
        if self.postprocess.map_scope not in ("recording", "channel", "global"):
            raise ConfigError(f"postprocess.map_scope must be recording, channel or global, got {self.postprocess.map_scope!r}")
        if not 0.0 <= self.postprocess.har_overlap < 1.0:
            raise ConfigError(f"postprocess.har_overlap must be in [0, 1), got {self.postprocess.har_overlap}")
        self.network.validate()
        self.train.validate()


_SECTIONS = ("trajectory", "kinematics", "network", "train", "postprocess")

_ENV_OVERRIDES = {
    "VIRTIMU_SEED": "train.seed",
    "VIRTIMU_EPOCHS": "train.epochs",
    "VIRTIMU_LR": "train.learning_rate",
    "VIRTIMU_CUTOFF_HZ": "postprocess.cutoff_hz",
}


def _coerce(key: str, value: Any, default: Any) -> Any:
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                return value.strip().lower() in {"1", "true", "yes", "on"}
            return bool(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = [v for v in value.replace(",", " ").split() if v]
            return tuple(type(default[0])(v) if default else v for v in value)
        if default is None and value is not None and key.endswith("trainable"):
            if isinstance(value, str):
                value = [v for v in value.replace(",", " ").split() if v]
            return tuple(str(v) for v in value)
        if isinstance(default, str):
            return str(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {key}: {value!r} ({e})") from e
    return value


def apply_overrides(cfg: PipelineConfig, overrides: Mapping[str, Any]) -> PipelineConfig:
    """Apply dotted-key overrides ("train.epochs": 5). None values are skipped."""
    sections = {name: getattr(cfg, name) for name in _SECTIONS}
    for dotted, value in overrides.items():
        if value is None:
            continue
        section, _, key = dotted.partition(".")
        if section not in sections or not key:
            raise ConfigError(f"Unknown config key: {dotted}")
        current = sections[section]
        names = {f.name for f in dataclasses.fields(current)}
        if key not in names:
            raise ConfigError(f"Unknown config key: {dotted}")
        coerced = _coerce(dotted, value, getattr(current, key))
        sections[section] = dataclasses.replace(current, **{key: coerced})
    return dataclasses.replace(cfg, **sections)


def _flatten_yaml(doc: Mapping[str, Any]) -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for section, body in doc.items():
        if section == "profile":
            continue
        if section not in _SECTIONS or not isinstance(body, dict):
            logger.warning("Ignoring unknown config section: %s", section)
            continue
        known = {f.name for f in dataclasses.fields(getattr(PipelineConfig(), section))}
        for k, v in body.items():
            if k not in known:
                logger.warning("Ignoring unknown config key: %s.%s", section, k)
                continue
            flat[f"{section}.{k}"] = v
    return flat


def load_config(path: Optional[str | Path] = None, profile: str = "default") -> PipelineConfig:
    """Load the pipeline config: defaults < YAML file < environment.

    The YAML file is `path` when given, else $VIRTIMU_CONFIG, else
    configs/<profile>.yaml when it exists. CLI flags are layered on top by the caller
    through apply_overrides.
    """
    cfg = PipelineConfig(profile=profile)

    yaml_path: Optional[Path] = None
    if path is not None:
        yaml_path = Path(path)
        if not yaml_path.exists():
            raise ConfigError(f"Config file not found: {yaml_path}")
    elif os.getenv("VIRTIMU_CONFIG"):
        yaml_path = Path(os.environ["VIRTIMU_CONFIG"])
        if not yaml_path.exists():
            raise ConfigError(f"VIRTIMU_CONFIG points to a missing file: {yaml_path}")
    else:
        candidate = Path("configs") / f"{profile}.yaml"
        if candidate.exists():
            yaml_path = candidate

    if yaml_path is not None:
        try:
            with open(yaml_path, "r", encoding="utf-8") as f:
                doc = yaml.safe_load(f) or {}
        except (yaml.YAMLError, UnicodeDecodeError) as e:
            raise ConfigError(f"Malformed config file {yaml_path}: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError(f"Config file {yaml_path} must contain a mapping")
        cfg = apply_overrides(cfg, _flatten_yaml(doc))
        logger.debug("Loaded config from %s", yaml_path)

    env = {key: os.getenv(var) for var, key in _ENV_OVERRIDES.items()}
    return apply_overrides(cfg, env)
