from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest
from scipy.stats import ks_2samp, rankdata

from virtimu.errors import ConfigError, NumericalError
from virtimu.postprocess import (
    IMU_CHANNELS,
    denormalize,
    distribution_map,
    export_har,
    har_windows,
    lowpass,
    map_recordings,
    normalize,
    window_labels,
)
from virtimu.schemas import HarExportMeta


# ---------- distribution mapping ----------

def test_mapped_values_follow_the_reference_distribution():
    rng = np.random.default_rng(0)
    sim = rng.normal(size=10_000)
    reference = rng.gamma(2.0, 1.5, size=10_000)
    mapped = distribution_map(sim, reference)
    assert ks_2samp(mapped, reference).statistic <= 0.01
    np.testing.assert_array_equal(rankdata(mapped), rankdata(sim))


def test_mapping_against_a_larger_reference():
    rng = np.random.default_rng(1)
    sim = rng.uniform(-3.0, 3.0, size=(10_000, 2))
    reference = np.stack([rng.normal(5.0, 2.0, 20_000), rng.exponential(1.0, 20_000)], axis=1)
    mapped = distribution_map(sim, reference)
    for c in range(2):
        assert ks_2samp(mapped[:, c], reference[:, c]).statistic <= 0.01
        np.testing.assert_array_equal(np.argsort(mapped[:, c]), np.argsort(sim[:, c]))


def test_ties_map_to_the_same_value():
    out = distribution_map(np.array([1.0, 2.0, 2.0, 3.0]), np.arange(10.0))
    assert out[1] == out[2]
    assert out[0] < out[1] < out[3]


def test_mapping_onto_its_own_output_changes_nothing():
    rng = np.random.default_rng(4)
    mapped = distribution_map(rng.normal(size=2000), rng.lognormal(size=3000))
    np.testing.assert_allclose(distribution_map(mapped, mapped), mapped, atol=1e-9)


def test_mapping_input_checks():
    with pytest.raises(ConfigError):
        distribution_map(np.array([]), np.ones(3))
    with pytest.raises(ConfigError, match="channels"):
        distribution_map(np.zeros((5, 3)), np.zeros((5, 2)))


def test_map_scopes():
    rng = np.random.default_rng(2)
    sims = [rng.normal(size=(200, 2)), rng.normal(size=(300, 2))]
    refs = [
        np.stack([rng.uniform(0, 1, 400), rng.uniform(10, 11, 400)], axis=1),
        np.stack([rng.uniform(2, 3, 400), rng.uniform(12, 13, 400)], axis=1),
    ]

    per_rec = map_recordings(sims, refs, "recording")
    assert per_rec[0][:, 0].max() <= 1.0 and per_rec[1][:, 0].min() >= 2.0

    per_channel = map_recordings(sims, refs, "channel")
    for out in per_channel:
        assert out[:, 0].min() < 1.0 and out[:, 0].max() > 2.0
        assert out[:, 1].min() >= 10.0

    pooled = map_recordings(sims, refs, "global")
    for out in pooled:
        assert out[:, 0].max() > 10.0 and out[:, 1].min() < 3.0


def test_map_scope_errors():
    with pytest.raises(ConfigError, match="map scope"):
        map_recordings([np.zeros((3, 1))], [np.zeros((3, 1))], "subject")
    with pytest.raises(ConfigError, match="references"):
        map_recordings([np.zeros((3, 1))] * 2, [np.zeros((3, 1))], "recording")


# ---------- filtering and normalization ----------

def test_lowpass_keeps_slow_motion_and_removes_jitter():
    rate = 100.0
    t = np.arange(1000) / rate
    slow = np.sin(2 * np.pi * 1.0 * t)
    fast = 0.5 * np.sin(2 * np.pi * 30.0 * t)
    out = lowpass(np.stack([slow + fast, slow], axis=1), rate, cutoff=10.0)
    interior = slice(100, -100)
    np.testing.assert_allclose(out[interior, 0], slow[interior], atol=5e-3)
    np.testing.assert_allclose(out[interior, 1], slow[interior], atol=1e-3)


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(x * x)))


def test_lowpass_gain_at_and_above_the_cutoff():
    rate, cutoff = 200.0, 10.0
    t = np.arange(4000) / rate
    interior = slice(1000, -1000)
    at_cutoff = np.sin(2 * np.pi * cutoff * t)
    ratio = _rms(lowpass(at_cutoff, rate, cutoff)[interior]) / _rms(at_cutoff[interior])
    assert ratio == pytest.approx(0.5, rel=0.05)
    above = np.sin(2 * np.pi * 4 * cutoff * t)
    attenuation_db = 20 * np.log10(_rms(lowpass(above, rate, cutoff)[interior]) / _rms(above[interior]))
    assert attenuation_db < -30.0


def test_lowpass_is_linear():
    rng = np.random.default_rng(5)
    x, y = rng.normal(size=(2, 600, 3))
    np.testing.assert_allclose(
        lowpass(2.0 * x - 0.5 * y, 100.0), 2.0 * lowpass(x, 100.0) - 0.5 * lowpass(y, 100.0), atol=1e-9
    )


@pytest.mark.parametrize("cutoff", [0.0, 25.0, 40.0])
def test_lowpass_cutoff_must_be_below_nyquist(cutoff):
    with pytest.raises(ConfigError, match="cutoff"):
        lowpass(np.zeros(100), 50.0, cutoff=cutoff)


def test_lowpass_needs_enough_samples():
    with pytest.raises(NumericalError):
        lowpass(np.zeros(10), 100.0)


def test_normalize_and_flag_constant_channels(caplog):
    rng = np.random.default_rng(3)
    x = np.stack([rng.normal(4.0, 2.0, 500), np.full(500, 9.81), rng.normal(size=500)], axis=1)
    out, stats = normalize(x)
    np.testing.assert_allclose(out[:, [0, 2]].mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(out[:, [0, 2]].std(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(out[:, 1], 0.0, atol=1e-12)
    assert stats.zero_variance.tolist() == [False, True, False]
    assert stats.flagged
    assert "Zero-variance" in caplog.text
    np.testing.assert_allclose(denormalize(out, stats), x, atol=1e-12)


def test_normalize_rejects_empty():
    with pytest.raises(ConfigError):
        normalize(np.zeros((0, 3)))


# ---------- HAR windows ----------

def test_har_window_count():
    windows, starts = har_windows(np.zeros((500, 6)), 50.0, window=1.0, overlap=0.5)
    assert windows.shape == (19, 50, 6)
    assert starts[-1] == 450


def test_har_windows_shorter_than_one_window():
    with pytest.raises(NumericalError):
        har_windows(np.zeros((40, 6)), 50.0)


def test_window_labels_majority_with_ties_to_smallest():
    labels = np.array([3, 3, 1, 1, 2, 2, 2, 0])
    out = window_labels(labels, [0, 2, 4], 4)
    assert out.tolist() == [1, 1, 2]


def test_window_labels_must_be_integers():
    with pytest.raises(ConfigError):
        window_labels(np.array([0.5, 1.0]), [0], 2)


def test_export_layout(tmp_path):
    windows = np.arange(3 * 4 * 6, dtype=float).reshape(3, 4, 6)
    meta = HarExportMeta(
        sample_rate=4.0, window_sec=1.0, overlap=0.5, window_length=4, hop=2, windows=3, channels=list(IMU_CHANNELS)
    )
    out = export_har(windows, np.array([0, 2, 1]), tmp_path / "har", meta)

    x = pd.read_csv(out / "X.csv", float_precision="round_trip")
    assert x.shape == (3, 24)
    assert list(x.columns[:7]) == ["ax_t0", "ay_t0", "az_t0", "gx_t0", "gy_t0", "gz_t0", "ax_t1"]
    np.testing.assert_array_equal(x.to_numpy(), windows.reshape(3, -1))
    assert pd.read_csv(out / "y.csv")["label"].tolist() == [0, 2, 1]

    doc = json.loads((out / "meta.json").read_text())
    assert doc["version"] == 1
    assert doc["mapping"] == "skipped"
    assert doc["windows"] == 3


def test_export_label_count_mismatch(tmp_path):
    meta = HarExportMeta(sample_rate=4.0, window_sec=1.0, overlap=0.5, window_length=4, hop=2, windows=3, channels=list(IMU_CHANNELS))
    with pytest.raises(ConfigError, match="labels"):
        export_har(np.zeros((3, 4, 6)), np.array([0, 1]), tmp_path, meta)
