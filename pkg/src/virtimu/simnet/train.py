from __future__ import annotations

import logging
from collections import OrderedDict
from typing import Dict, List, Optional, Tuple

import numpy as np

from virtimu.errors import ConfigError, NumericalError
from virtimu.simnet.bundle import WeightBundle, init_weights
from virtimu.simnet.config import NetworkConfig, TrainConfig
from virtimu.simnet.network import Params, forward, loss_and_gradient, mse_loss
from virtimu.simnet.windows import WindowSet

logger = logging.getLogger(__name__)


class Optimizer:
    """Adam or plain SGD over the parameters selected by `trainable` prefixes."""

    def __init__(self, params: Params, cfg: TrainConfig):
        self.cfg = cfg
        prefixes = cfg.trainable
        self.names = [n for n in params if prefixes is None or any(n.startswith(p) for p in prefixes)]
        if not self.names:
            raise ConfigError(f"trainable prefixes {prefixes} select no parameters")
        self.step_count = 0
        self.m: Dict[str, np.ndarray] = {n: np.zeros_like(params[n]) for n in self.names}
        self.v: Dict[str, np.ndarray] = {n: np.zeros_like(params[n]) for n in self.names}

    def step(self, params: Params, grads: Params) -> None:
        cfg = self.cfg
        lr = cfg.learning_rate
        self.step_count += 1
        if cfg.optimizer == "sgd":
            for n in self.names:
                params[n] -= lr * grads[n]
            return
        b1, b2 = cfg.beta1, cfg.beta2
        c1 = 1.0 - b1**self.step_count
        c2 = 1.0 - b2**self.step_count
        for n in self.names:
            g = grads[n]
            self.m[n] = b1 * self.m[n] + (1.0 - b1) * g
            self.v[n] = b2 * self.v[n] + (1.0 - b2) * g * g
            params[n] -= lr * (self.m[n] / c1) / (np.sqrt(self.v[n] / c2) + cfg.eps)


def dataset_loss(params: Params, cfg: NetworkConfig, windows: WindowSet, batch_size: int) -> float:
    """MSE over every window, evaluated in index order."""
    total = 0.0
    for start in range(0, len(windows), batch_size):
        sl = slice(start, start + batch_size)
        y, _ = forward(params, cfg, windows.inputs[sl])
        loss, _ = mse_loss(y, windows.targets[sl])
        total += loss * y.shape[0]
    return total / len(windows)


def train(
    windows: WindowSet,
    cfg: TrainConfig,
    network: Optional[NetworkConfig] = None,
    *,
    kind: str = "accel",
    initial: Optional[WeightBundle] = None,
) -> Tuple[WeightBundle, List[float]]:
    """Fit one network (accel or gyro) to a window set.

    Example call:
        bundle, history = train(build_windows(tracks, "wrist", targets, cfg), cfg, NetworkConfig(hidden_size=32))

    Args:
        windows: standardized inputs with global-frame targets.
        cfg: optimiser, epochs, batch size and seed.
        network: layer sizes; defaults to NetworkConfig().
        kind: "accel" or "gyro", recorded in the bundle.
        initial: start from these weights instead of a seeded init.

    Returns:
        (trained bundle, full-dataset MSE after each epoch).

    Raises:
        ConfigError: empty window set or invalid settings.
        NumericalError: loss became non-finite; `history` holds the epochs completed.
    """
    cfg.validate()
    if len(windows) == 0:
        raise ConfigError("train needs at least one window")
    network = network or (initial.config if initial is not None else NetworkConfig())
    if windows.inputs.shape[2] != network.input_dim:
        raise ConfigError(f"windows carry {windows.inputs.shape[2]} input channels, network expects {network.input_dim}")

    bundle = initial.copy() if initial is not None else init_weights(network, cfg.seed, kind=kind)
    bundle.kind = kind
    bundle.input_mean = windows.mean.copy()
    bundle.input_std = windows.std.copy()
    bundle.train = cfg.to_dict()
    params = bundle.params
    opt = Optimizer(params, cfg)
    rng = np.random.default_rng(cfg.seed)
    history: List[float] = []

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(windows))
        for start in range(0, len(order), cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            try:
                _, grads = loss_and_gradient(params, network, windows.inputs[idx], windows.targets[idx])
            except NumericalError as e:
                raise NumericalError(f"Training diverged in epoch {epoch}: {e}", history=history) from e
            opt.step(params, grads)
        loss = dataset_loss(params, network, windows, cfg.batch_size)
        if not np.isfinite(loss):
            raise NumericalError(f"Training diverged in epoch {epoch}: loss {loss}", history=history)
        history.append(loss)
        logger.info("Epoch %d/%d: %s loss %.6g", epoch, cfg.epochs, kind, loss)

    bundle.epochs_run = len(history)
    bundle.params = OrderedDict(params)
    return bundle, history
