# simnet/config.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from virtimu.errors import ConfigError

CONV_LAYERS = 3
LSTM_LAYERS = 2
OUTPUT_DIM = 3
POSITION_DIM = 27  # 3 triangles x 3 vertices x 3 coords
ORIENTATION_DIM = 4


@dataclass(frozen=True)
class NetworkConfig:
    # Conv stack: 3 layers, stride 1, same padding, ReLU
    conv_channels: Tuple[int, int, int] = (64, 64, 64)
    kernel_size: int = 5
    # Two bidirectional LSTM layers, hidden size per direction
    hidden_size: int = 128
    # Append the per-frame segment quaternion to the vertex input (27 -> 31 dims)
    with_orientation: bool = False

    @property
    def input_dim(self) -> int:
        return POSITION_DIM + (ORIENTATION_DIM if self.with_orientation else 0)

    @property
    def output_dim(self) -> int:
        return OUTPUT_DIM

    def validate(self) -> None:
        if len(self.conv_channels) != CONV_LAYERS:
            raise ConfigError(f"conv_channels must list {CONV_LAYERS} layers, got {len(self.conv_channels)}")
        if any(int(c) <= 0 for c in self.conv_channels) or self.kernel_size <= 0 or self.hidden_size <= 0:
            raise ConfigError("network sizes must be positive")

    def to_dict(self) -> dict:
        return {
            "conv_channels": [int(c) for c in self.conv_channels],
            "kernel_size": int(self.kernel_size),
            "hidden_size": int(self.hidden_size),
            "with_orientation": bool(self.with_orientation),
            "input_dim": self.input_dim,
            "output_dim": self.output_dim,
            "conv_layers": CONV_LAYERS,
            "lstm_layers": LSTM_LAYERS,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkConfig":
        cfg = cls(
            conv_channels=tuple(int(c) for c in d.get("conv_channels", (64, 64, 64))),  # type: ignore[arg-type]
            kernel_size=int(d.get("kernel_size", 5)),
            hidden_size=int(d.get("hidden_size", 128)),
            with_orientation=bool(d.get("with_orientation", False)),
        )
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class TrainConfig:
    # Windowing for training and prediction
    window_sec: float = 2.0
    overlap: float = 0.8

    # Optimisation
    batch_size: int = 16
    epochs: int = 50
    learning_rate: float = 1e-3
    optimizer: Literal["adam", "sgd"] = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    # Parameter-name prefixes to update; None trains everything
    trainable: Optional[Tuple[str, ...]] = None

    # Prediction
    workers: int = 1

    def validate(self, rate: float | None = None) -> None:
        if not 0.0 <= self.overlap < 1.0:
            raise ConfigError(f"overlap must be in [0, 1), got {self.overlap}")
        if self.batch_size < 1 or self.epochs < 0 or self.learning_rate < 0:
            raise ConfigError("batch_size >= 1, epochs >= 0 and learning_rate >= 0 are required")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0 and self.eps > 0):
            raise ConfigError("Adam moments need 0 <= beta < 1 and eps > 0")
        if rate is not None and round(self.window_sec * rate) < 5:
            raise ConfigError(f"window {self.window_sec}s at {rate} Hz gives fewer than 5 samples")

    def to_dict(self) -> dict:
        return {
            "window_sec": self.window_sec,
            "overlap": self.overlap,
            "batch_size": self.batch_size,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "optimizer": self.optimizer,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "seed": self.seed,
            "trainable": list(self.trainable) if self.trainable is not None else None,
        }

