"""Layer kernels with explicit backward passes, batch-major (B, T, C) throughout.

LSTM gates are packed as [i, f, o, g] along the last axis of Wx (D, 4H), Wh (H, 4H)
and b (4H,).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit


# ---------- Conv1d (stride 1, same padding) ----------

@dataclass
class ConvCache:
    windows: np.ndarray  # (B, T, Cin, K) view into the padded input
    pad_left: int
    mask: np.ndarray  # (B, T, Cout) ReLU mask


def conv1d_relu_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, ConvCache]:
    k = w.shape[2]
    pad_left, pad_right = (k - 1) // 2, k // 2
    xp = np.pad(x, ((0, 0), (pad_left, pad_right), (0, 0)))
    windows = sliding_window_view(xp, k, axis=1)  # (B, T, Cin, K)
    z = np.einsum("btck,ock->bto", windows, w) + b
    mask = z > 0
    return z * mask, ConvCache(windows=windows, pad_left=pad_left, mask=mask)


def conv1d_relu_backward(dy: np.ndarray, w: np.ndarray, cache: ConvCache) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (dx, dW, db)."""
    dz = dy * cache.mask
    windows = cache.windows
    b_, t_, cin, k = windows.shape
    dw = np.einsum("bto,btck->ock", dz, windows)
    db = dz.sum(axis=(0, 1))
    dwin = np.einsum("bto,ock->btck", dz, w)
    dxp = np.zeros((b_, t_ + k - 1, cin))
    for j in range(k):
        dxp[:, j : j + t_, :] += dwin[:, :, :, j]
    return dxp[:, cache.pad_left : cache.pad_left + t_, :], dw, db


# ---------- LSTM ----------

@dataclass
class LstmCache:
    x: np.ndarray  # (B, T, D)
    h_prev: np.ndarray  # (B, T, H) hidden state entering each step
    c_prev: np.ndarray  # (B, T, H)
    gates: np.ndarray  # (B, T, 4H) activated i, f, o, g
    tanh_c: np.ndarray  # (B, T, H)


def lstm_forward(x: np.ndarray, wx: np.ndarray, wh: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, LstmCache]:
    n, steps, _ = x.shape
    hidden = wh.shape[0]
    xw = np.einsum("btd,dg->btg", x, wx) + b
    h = np.zeros((n, hidden))
    c = np.zeros((n, hidden))
    out = np.empty((n, steps, hidden))
    h_prev = np.empty_like(out)
    c_prev = np.empty_like(out)
    gates = np.empty((n, steps, 4 * hidden))
    tanh_c = np.empty_like(out)
    for t in range(steps):
        h_prev[:, t] = h
        c_prev[:, t] = c
        z = xw[:, t] + h @ wh
        ifo = expit(z[:, : 3 * hidden])
        g = np.tanh(z[:, 3 * hidden :])
        i, f, o = ifo[:, :hidden], ifo[:, hidden : 2 * hidden], ifo[:, 2 * hidden :]
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates[:, t, : 3 * hidden] = ifo
        gates[:, t, 3 * hidden :] = g
        tanh_c[:, t] = tc
        out[:, t] = h
    return out, LstmCache(x=x, h_prev=h_prev, c_prev=c_prev, gates=gates, tanh_c=tanh_c)


def lstm_backward(dh_out: np.ndarray, wx: np.ndarray, wh: np.ndarray, cache: LstmCache) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Returns (dx, dWx, dWh, db)."""
    n, steps, hidden = dh_out.shape
    dz = np.empty((n, steps, 4 * hidden))
    dh_next = np.zeros((n, hidden))
    dc_next = np.zeros((n, hidden))
    for t in reversed(range(steps)):
        gates = cache.gates[:, t]
        i, f, o, g = (gates[:, k * hidden : (k + 1) * hidden] for k in range(4))
        tc = cache.tanh_c[:, t]
        dh = dh_out[:, t] + dh_next
        dc = dc_next + dh * o * (1.0 - tc * tc)
        dz[:, t, :hidden] = dc * g * i * (1.0 - i)
        dz[:, t, hidden : 2 * hidden] = dc * cache.c_prev[:, t] * f * (1.0 - f)
        dz[:, t, 2 * hidden : 3 * hidden] = dh * tc * o * (1.0 - o)
        dz[:, t, 3 * hidden :] = dc * i * (1.0 - g * g)
        dc_next = dc * f
        dh_next = dz[:, t] @ wh.T
    dwx = np.einsum("btd,btg->dg", cache.x, dz)
    dwh = np.einsum("bth,btg->hg", cache.h_prev, dz)
    db = dz.sum(axis=(0, 1))
    dx = np.einsum("btg,dg->btd", dz, wx)
    return dx, dwx, dwh, db


# ---------- Linear head ----------

def linear_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("bth,ho->bto", x, w) + b


def linear_backward(dy: np.ndarray, x: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.einsum("bto,ho->bth", dy, w), np.einsum("bth,bto->ho", x, dy), dy.sum(axis=(0, 1))
