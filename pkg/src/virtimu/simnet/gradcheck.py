from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from virtimu.simnet.bundle import WeightBundle
from virtimu.simnet.network import forward, loss_and_gradient, mse_loss

logger = logging.getLogger(__name__)


@dataclass
class GradCheckReport:
    max_rel_error: float
    checked: int
    skipped: int
    worst: Tuple[str, Tuple[int, ...]] | None = None
    errors: List[float] = field(default_factory=list)


def _loss_and_masks(bundle: WeightBundle, inputs: np.ndarray, targets: np.ndarray) -> Tuple[float, List[np.ndarray]]:
    y, cache = forward(bundle.params, bundle.config, inputs, keep_cache=True)
    assert cache is not None
    loss, _ = mse_loss(y, targets)
    return loss, cache.relu_masks


def check_gradient(
    bundle: WeightBundle,
    inputs: np.ndarray,
    targets: np.ndarray,
    *,
    coords: int = 100,
    h: float = 1e-5,
    seed: int = 0,
) -> GradCheckReport:
    """Compare backprop against central finite differences on random coordinates.

    Coordinates whose +/-h perturbation flips any ReLU are skipped and replaced; the
    loss is not differentiable there. Relative error is |a - n| / max(|a| + |n|, 1e-6).
    """
    _, grads = loss_and_gradient(bundle.params, bundle.config, inputs, targets)
    _, base_masks = _loss_and_masks(bundle, inputs, targets)
    names = list(bundle.params)
    sizes = np.array([bundle.params[n].size for n in names])
    bounds = np.cumsum(sizes)
    rng = np.random.default_rng(seed)

    errors: List[float] = []
    skipped = 0
    worst = None
    worst_err = -1.0
    attempts = 0
    while len(errors) < coords and attempts < 20 * coords:
        attempts += 1
        flat = int(rng.integers(bounds[-1]))
        k = int(np.searchsorted(bounds, flat, side="right"))
        name = names[k]
        local = flat - (bounds[k - 1] if k else 0)
        arr = bundle.params[name]
        idx = np.unravel_index(local, arr.shape)
        orig = arr[idx]

        arr[idx] = orig + h
        lp, masks_p = _loss_and_masks(bundle, inputs, targets)
        arr[idx] = orig - h
        lm, masks_m = _loss_and_masks(bundle, inputs, targets)
        arr[idx] = orig
        if any(not np.array_equal(a, b) for a, b in zip(masks_p, base_masks)) or any(
            not np.array_equal(a, b) for a, b in zip(masks_m, base_masks)
        ):
            skipped += 1
            continue

        numeric = (lp - lm) / (2.0 * h)
        analytic = float(grads[name][idx])
        err = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)
        errors.append(err)
        if err > worst_err:
            worst_err = err
            worst = (name, tuple(int(i) for i in idx))

    report = GradCheckReport(max_rel_error=max(errors) if errors else 0.0, checked=len(errors), skipped=skipped, worst=worst, errors=errors)
    logger.info("Gradient check: %d coords, %d skipped, max rel error %.3g at %s", report.checked, skipped, report.max_rel_error, worst)
    return report
