"""Conv x3 -> bidirectional LSTM x2 -> per-frame linear head.

Parameters live in a flat name -> array dict, ordered as :func:`param_shapes` lists
them; that order is also the order of the binary weights blob.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from virtimu.errors import ConfigError, NumericalError
from virtimu.simnet.config import CONV_LAYERS, LSTM_LAYERS, NetworkConfig
from virtimu.simnet.layers import (
    ConvCache,
    LstmCache,
    conv1d_relu_backward,
    conv1d_relu_forward,
    linear_backward,
    linear_forward,
    lstm_backward,
    lstm_forward,
)

logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]


def param_shapes(cfg: NetworkConfig) -> "OrderedDict[str, Tuple[int, ...]]":
    shapes: "OrderedDict[str, Tuple[int, ...]]" = OrderedDict()
    c_in = cfg.input_dim
    for layer, c_out in enumerate(cfg.conv_channels, start=1):
        shapes[f"conv{layer}.W"] = (int(c_out), c_in, cfg.kernel_size)
        shapes[f"conv{layer}.b"] = (int(c_out),)
        c_in = int(c_out)
    h = cfg.hidden_size
    d_in = c_in
    for layer in range(1, LSTM_LAYERS + 1):
        for direction in ("fwd", "bwd"):
            shapes[f"lstm{layer}.{direction}.Wx"] = (d_in, 4 * h)
            shapes[f"lstm{layer}.{direction}.Wh"] = (h, 4 * h)
            shapes[f"lstm{layer}.{direction}.b"] = (4 * h,)
        d_in = 2 * h
    shapes["head.W"] = (2 * h, cfg.output_dim)
    shapes["head.b"] = (cfg.output_dim,)
    return shapes


def init_params(cfg: NetworkConfig, seed: int) -> Params:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights; LSTM forget-gate biases start at 1."""
    cfg.validate()
    rng = np.random.default_rng(seed)
    h = cfg.hidden_size
    params: Params = OrderedDict()
    shapes = param_shapes(cfg)
    for name, shape in shapes.items():
        if name.startswith("conv"):
            w_shape = shapes[name.split(".")[0] + ".W"]
            fan_in = w_shape[1] * w_shape[2]
        elif name.startswith("lstm"):
            fan_in = h
        else:
            fan_in = 2 * h
        bound = 1.0 / np.sqrt(fan_in)
        params[name] = rng.uniform(-bound, bound, size=shape)
        if name.startswith("lstm") and name.endswith(".b"):
            params[name][h : 2 * h] = 1.0
    return params


def zero_params(cfg: NetworkConfig) -> Params:
    return OrderedDict((name, np.zeros(shape)) for name, shape in param_shapes(cfg).items())


@dataclass
class ForwardCache:
    conv: List[ConvCache]
    lstm: List[Tuple[LstmCache, LstmCache]]
    features: np.ndarray  # (B, T, 2H) head input

    @property
    def relu_masks(self) -> List[np.ndarray]:
        return [c.mask for c in self.conv]


def _check_input(params: Params, cfg: NetworkConfig, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3 or x.shape[2] != cfg.input_dim:
        raise ConfigError(f"network input must be (B, T, {cfg.input_dim}), got {x.shape}")
    expected = param_shapes(cfg)
    for name, shape in expected.items():
        if name not in params or params[name].shape != shape:
            raise ConfigError(f"parameter {name} missing or shaped {getattr(params.get(name), 'shape', None)}, expected {shape}")
    return x


def forward(params: Params, cfg: NetworkConfig, x: np.ndarray, *, keep_cache: bool = False) -> Tuple[np.ndarray, Optional[ForwardCache]]:
    """Predict (B, T, 3) from standardized input (B, T, input_dim); no state survives the call."""
    x = _check_input(params, cfg, x)
    conv_caches: List[ConvCache] = []
    act = x
    for layer in range(1, CONV_LAYERS + 1):
        act, cc = conv1d_relu_forward(act, params[f"conv{layer}.W"], params[f"conv{layer}.b"])
        conv_caches.append(cc)
    lstm_caches: List[Tuple[LstmCache, LstmCache]] = []
    for layer in range(1, LSTM_LAYERS + 1):
        p = f"lstm{layer}"
        h_f, cf = lstm_forward(act, params[f"{p}.fwd.Wx"], params[f"{p}.fwd.Wh"], params[f"{p}.fwd.b"])
        h_b, cb = lstm_forward(act[:, ::-1], params[f"{p}.bwd.Wx"], params[f"{p}.bwd.Wh"], params[f"{p}.bwd.b"])
        act = np.concatenate([h_f, h_b[:, ::-1]], axis=2)
        lstm_caches.append((cf, cb))
    y = linear_forward(act, params["head.W"], params["head.b"])
    cache = ForwardCache(conv=conv_caches, lstm=lstm_caches, features=act) if keep_cache else None
    return y, cache


def backward(params: Params, cfg: NetworkConfig, dy: np.ndarray, cache: ForwardCache) -> Params:
    grads: Params = OrderedDict()
    d_act, grads["head.W"], grads["head.b"] = linear_backward(dy, cache.features, params["head.W"])
    h = cfg.hidden_size
    for layer in range(LSTM_LAYERS, 0, -1):
        p = f"lstm{layer}"
        cf, cb = cache.lstm[layer - 1]
        dx_f, grads[f"{p}.fwd.Wx"], grads[f"{p}.fwd.Wh"], grads[f"{p}.fwd.b"] = lstm_backward(
            d_act[:, :, :h], params[f"{p}.fwd.Wx"], params[f"{p}.fwd.Wh"], cf
        )
        dx_b, grads[f"{p}.bwd.Wx"], grads[f"{p}.bwd.Wh"], grads[f"{p}.bwd.b"] = lstm_backward(
            d_act[:, ::-1, h:], params[f"{p}.bwd.Wx"], params[f"{p}.bwd.Wh"], cb
        )
        d_act = dx_f + dx_b[:, ::-1]
    for layer in range(CONV_LAYERS, 0, -1):
        d_act, grads[f"conv{layer}.W"], grads[f"conv{layer}.b"] = conv1d_relu_backward(
            d_act, params[f"conv{layer}.W"], cache.conv[layer - 1]
        )
    return OrderedDict((name, grads[name]) for name in param_shapes(cfg))


def mse_loss(y: np.ndarray, target: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean squared error over every element and its gradient w.r.t. y."""
    diff = y - target
    return float(np.mean(diff * diff)), 2.0 * diff / diff.size


def loss_and_gradient(params: Params, cfg: NetworkConfig, inputs: np.ndarray, targets: np.ndarray) -> Tuple[float, Params]:
    """MSE of one batch and its gradient for every parameter.

    Raises:
        ConfigError: empty batch or mismatched target shape.
        NumericalError: non-finite loss.
    """
    if inputs.shape[0] == 0:
        raise ConfigError("loss_and_gradient needs a non-empty batch")
    y, cache = forward(params, cfg, inputs, keep_cache=True)
    if y.shape != targets.shape:
        raise ConfigError(f"targets shaped {targets.shape}, predictions {y.shape}")
    loss, dy = mse_loss(y, targets)
    if not np.isfinite(loss):
        bad = [name for name, v in params.items() if not np.all(np.isfinite(v))]
        where = f"non-finite parameters: {', '.join(bad)}" if bad else "non-finite input or target values"
        raise NumericalError(f"Non-finite loss ({where})")
    assert cache is not None
    return loss, backward(params, cfg, dy, cache)
