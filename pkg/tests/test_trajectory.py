from __future__ import annotations

import numpy as np
import pytest

from virtimu.core.config import TrajectoryConfig
from virtimu.errors import ConfigError, NumericalError
from virtimu.trajectory import (
    GappedSeries,
    KalmanParams,
    condition_root_trajectory,
    condition_track_set,
    gate_by_confidence,
    interpolate_gaps,
    kalman_smooth,
    resolve_scale,
)
from tests.helpers import orbit_tracks


def _mask(n: int, missing) -> np.ndarray:
    m = np.ones(n, dtype=bool)
    m[list(missing)] = False
    return m


# ---------- gating ----------

def test_gate_by_confidence_masks_low_frames():
    pos = np.arange(15.0).reshape(5, 3)
    g = gate_by_confidence(pos, np.array([0.9, 0.2, 0.5, 0.49, 1.0]), 0.5, sample_rate=10.0)
    np.testing.assert_array_equal(g.present_mask, [True, False, True, False, True])
    assert np.isnan(g.samples[1]).all()
    np.testing.assert_array_equal(g.samples[2], pos[2])
    assert g.gaps() == [(1, 2), (3, 4)]


def test_gate_everything_out():
    with pytest.raises(NumericalError):
        gate_by_confidence(np.zeros((4, 3)), np.full(4, 0.1), 0.5)


def test_gate_threshold_range():
    with pytest.raises(ConfigError):
        gate_by_confidence(np.zeros((4, 3)), np.ones(4), 1.5)


# ---------- interpolation ----------

def test_linear_fill_is_exact_on_a_line():
    t = np.arange(20) / 10.0
    x = np.stack([2.0 * t + 1.0, -t, np.full_like(t, 3.0)], axis=1)
    mask = _mask(20, range(5, 12))
    samples = np.where(mask[:, None], x, np.nan)
    out = interpolate_gaps(GappedSeries(10.0, samples, mask), "linear")
    np.testing.assert_allclose(out, x, atol=1e-12)


def test_cubic_fill_reproduces_a_cubic():
    t = np.arange(30) / 10.0
    x = t**3 - 2.0 * t**2 + 0.5
    mask = _mask(30, [8, 9, 10, 20])
    out = interpolate_gaps(GappedSeries(10.0, np.where(mask, x, np.nan), mask), "cubic")
    np.testing.assert_allclose(out, x, atol=1e-9)


def test_auto_uses_cubic_only_for_short_gaps():
    rate = 10.0
    t = np.arange(60) / rate
    x = t**2
    short = [10, 11]  # 0.2 s
    long = list(range(30, 40))  # 1.0 s
    mask = _mask(60, short + long)
    g = GappedSeries(rate, np.where(mask, x, np.nan), mask)
    out = interpolate_gaps(g, "auto", max_cubic_gap_s=0.5)
    np.testing.assert_allclose(out[short], x[short], atol=1e-9)
    expected_linear = np.interp(t[long], t[mask], x[mask])
    np.testing.assert_allclose(out[long], expected_linear, atol=1e-12)
    assert np.all(out[long] > x[long])


def test_leading_and_trailing_gaps_hold_nearest_value():
    x = np.array([np.nan, np.nan, 1.0, 2.0, 4.0, np.nan])
    mask = ~np.isnan(x)
    out = interpolate_gaps(GappedSeries(1.0, x, mask), "cubic")
    np.testing.assert_array_equal(out, [1.0, 1.0, 1.0, 2.0, 4.0, 4.0])


def test_interpolation_needs_two_samples():
    x = np.array([np.nan, 1.0, np.nan])
    with pytest.raises(NumericalError):
        interpolate_gaps(GappedSeries(1.0, x, ~np.isnan(x)))


def test_unknown_interpolation_method():
    x = np.arange(4.0)
    with pytest.raises(ConfigError):
        interpolate_gaps(GappedSeries(1.0, x, np.ones(4, dtype=bool)), "nearest")


# ---------- Kalman / RTS ----------

def test_smoother_leaves_lines_and_constants_unchanged():
    t = np.arange(200) / 50.0
    x = np.stack([0.3 * t - 1.0, np.full_like(t, 2.0), -1.5 * t], axis=1)
    np.testing.assert_allclose(kalman_smooth(x, 50.0), x, atol=1e-9)


def test_smoother_reduces_noise_on_most_seeds():
    rate = 100.0
    t = np.arange(500) / rate
    truth = 0.8 * t + 0.1
    wins = 0
    for seed in range(100):
        noisy = truth + np.random.default_rng(seed).normal(scale=0.05, size=t.size)
        smoothed = kalman_smooth(noisy, rate, KalmanParams(process_noise=1.0, measurement_noise=0.0025))
        raw_err = np.sqrt(np.mean((noisy - truth) ** 2))
        smooth_err = np.sqrt(np.mean((smoothed - truth) ** 2))
        wins += smooth_err < raw_err
    assert wins >= 95


def test_smoother_commutes_with_translation():
    rng = np.random.default_rng(8)
    x = np.cumsum(rng.normal(scale=0.02, size=(300, 3)), axis=0)
    offset = np.array([3.0, -1.25, 0.5])
    np.testing.assert_allclose(kalman_smooth(x + offset, 60.0), kalman_smooth(x, 60.0) + offset, atol=1e-9)


def test_smoother_input_checks():
    with pytest.raises(NumericalError):
        kalman_smooth(np.array([1.0]), 10.0)
    with pytest.raises(NumericalError):
        kalman_smooth(np.array([1.0, np.nan, 2.0]), 10.0)
    with pytest.raises(ConfigError):
        kalman_smooth(np.arange(5.0), 10.0, KalmanParams(measurement_noise=0.0))


# ---------- conditioning ----------

def test_resolve_scale():
    np.testing.assert_allclose(resolve_scale(np.ones((2, 3)), 1.8, 0.6), np.full((2, 3), 3.0))
    with pytest.raises(ConfigError):
        resolve_scale(np.ones((2, 3)), 1.8, 0.0)


@pytest.mark.parametrize("method", ["linear", "cubic", "auto"])
def test_scaling_commutes_with_gap_filling(method):
    rng = np.random.default_rng(9)
    x = np.cumsum(rng.normal(size=(80, 3)), axis=0)
    mask = _mask(80, [0, 5, 6, 7, 30, 31, 32, 33, 34, 35, 36, 37, 38, 79])
    samples = np.where(mask[:, None], x, np.nan)
    fill_then_scale = resolve_scale(interpolate_gaps(GappedSeries(20.0, samples, mask), method), 1.75, 1.6)
    scale_then_fill = interpolate_gaps(GappedSeries(20.0, resolve_scale(samples, 1.75, 1.6), mask), method)
    np.testing.assert_allclose(scale_then_fill, fill_then_scale, rtol=1e-12, atol=1e-12)


def test_condition_root_trajectory_fills_smooths_and_scales():
    rate = 30.0
    t = np.arange(90) / rate
    truth = np.stack([t, 0.5 * t, np.ones_like(t)], axis=1)
    conf = np.ones(90)
    conf[40:45] = 0.1
    noisy = truth.copy()
    noisy[40:45] = 50.0  # garbage in low-confidence frames
    out = condition_root_trajectory(noisy, conf, rate, TrajectoryConfig(), known_length=2.0, estimated_length=1.0)
    np.testing.assert_allclose(out, 2.0 * truth, atol=1e-6)


def test_condition_root_trajectory_needs_both_lengths():
    with pytest.raises(ConfigError):
        condition_root_trajectory(np.zeros((10, 3)), np.ones(10), 10.0, known_length=1.0)


def test_condition_track_set_fills_gated_frames():
    n = 50
    conf = np.ones(n)
    conf[20:23] = 0.0
    clean = orbit_tracks(rate=50.0, seconds=1.0, omega=1.0)
    tracks = orbit_tracks(rate=50.0, seconds=1.0, omega=1.0, confidence=conf)
    tracks.regions["wrist"].vertices[20:23] += 5.0
    tracks.regions["wrist"].orientation[20:23] = [1.0, 0.0, 0.0, 0.0]

    out = condition_track_set(tracks, TrajectoryConfig(smooth=False, interpolation="cubic"))
    assert out.confidence is None
    reg, ref = out.regions["wrist"], clean.regions["wrist"]
    np.testing.assert_allclose(reg.vertices, ref.vertices, atol=1e-6)
    # slerp between neighbours recovers the constant-rate rotation
    dots = np.abs(np.sum(reg.orientation * ref.orientation, axis=1))
    np.testing.assert_allclose(dots, 1.0, atol=1e-12)
