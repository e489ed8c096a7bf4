from __future__ import annotations

import logging

import numpy as np
import pytest

from virtimu.core.config import PipelineConfig, apply_overrides, load_config
from virtimu.core.windowing import compute_window_starts, slice_windows, window_count, window_geometry
from virtimu.errors import ConfigError
from virtimu.simnet.config import NetworkConfig, TrainConfig


# ---------- windowing ----------

@pytest.mark.parametrize(
    "n, rate, window, overlap, expected",
    [
        (600, 60.0, 2.0, 0.8, 21),
        (500, 50.0, 1.0, 0.5, 19),
        (50, 50.0, 1.0, 0.5, 1),
        (49, 50.0, 1.0, 0.5, 0),
        (100, 10.0, 1.0, 0.0, 10),
    ],
)
def test_window_count_formula(n, rate, window, overlap, expected):
    length, hop = window_geometry(rate, window, overlap)
    assert window_count(n, length, hop) == expected
    assert len(compute_window_starts(n, length, hop)) == expected


def test_window_geometry_values():
    assert window_geometry(60.0, 2.0, 0.8) == (120, 24)
    assert window_geometry(50.0, 1.0, 0.5) == (50, 25)


@pytest.mark.parametrize("overlap", [1.0, 1.5, -0.1])
def test_overlap_outside_unit_interval(overlap):
    with pytest.raises(ConfigError):
        window_geometry(50.0, 1.0, overlap)


def test_cover_tail_appends_right_aligned_window():
    assert compute_window_starts(23, 10, 5) == [0, 5, 10]
    assert compute_window_starts(23, 10, 5, cover_tail=True) == [0, 5, 10, 13]
    assert compute_window_starts(20, 10, 5, cover_tail=True) == [0, 5, 10]


def test_slice_windows_shapes():
    data = np.arange(30.0).reshape(10, 3)
    w = slice_windows(data, [0, 4], 5)
    assert w.shape == (2, 5, 3)
    np.testing.assert_array_equal(w[1, 0], data[4])
    assert slice_windows(data, [], 5).shape == (0, 5, 3)


# ---------- config layering ----------

def test_defaults():
    cfg = load_config()
    assert cfg == PipelineConfig()
    assert cfg.kinematics.gravity_magnitude == 9.80665
    assert cfg.train.window_sec == 2.0 and cfg.train.overlap == 0.8
    assert cfg.postprocess.har_window_sec == 1.0 and cfg.postprocess.har_overlap == 0.5
    assert cfg.postprocess.cutoff_hz == 10.0


def test_yaml_then_env_then_flags(tmp_path, monkeypatch):
    path = tmp_path / "exp.yaml"
    path.write_text("train:\n  epochs: 7\n  seed: 3\nnetwork:\n  conv_channels: [8, 8, 8]\npostprocess:\n  map_scope: channel\n")
    monkeypatch.setenv("VIRTIMU_SEED", "11")
    cfg = load_config(path)
    assert cfg.train.epochs == 7
    assert cfg.train.seed == 11
    assert cfg.network.conv_channels == (8, 8, 8)
    assert cfg.postprocess.map_scope == "channel"

    cfg = apply_overrides(cfg, {"train.seed": 5, "train.epochs": None, "network.conv_channels": "4,4,4"})
    assert cfg.train.seed == 5
    assert cfg.train.epochs == 7
    assert cfg.network.conv_channels == (4, 4, 4)


def test_profile_file_is_picked_up_from_configs_dir(tmp_path):
    (tmp_path / "configs").mkdir()
    (tmp_path / "configs" / "quick.yaml").write_text("train:\n  epochs: 2\n")
    cfg = load_config(profile="quick")
    assert cfg.profile == "quick"
    assert cfg.train.epochs == 2


def test_config_env_variable_points_to_file(tmp_path, monkeypatch):
    path = tmp_path / "other.yaml"
    path.write_text("kinematics:\n  gravity_sign: -1\n")
    monkeypatch.setenv("VIRTIMU_CONFIG", str(path))
    assert load_config().kinematics.gravity_sign == -1.0


def test_unknown_yaml_keys_are_ignored_with_warning(tmp_path, caplog):
    path = tmp_path / "exp.yaml"
    path.write_text("train:\n  epochz: 3\nsimulator:\n  x: 1\n")
    with caplog.at_level(logging.WARNING, logger="virtimu.core.config"):
        cfg = load_config(path)
    assert cfg == PipelineConfig()
    assert "train.epochz" in caplog.text
    assert "simulator" in caplog.text


def test_bad_value_type_is_a_config_error(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text("train:\n  epochs: many\n")
    with pytest.raises(ConfigError, match="train.epochs"):
        load_config(path)


def test_missing_config_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config("nowhere.yaml")


def test_unknown_override_key():
    with pytest.raises(ConfigError, match="Unknown config key"):
        apply_overrides(PipelineConfig(), {"train.momentum": 0.9})


def test_boolean_and_trainable_coercion():
    cfg = apply_overrides(PipelineConfig(), {"trajectory.smooth": "false", "train.trainable": "head.,lstm2."})
    assert cfg.trajectory.smooth is False
    assert cfg.train.trainable == ("head.", "lstm2.")


@pytest.mark.parametrize(
    "key, value",
    [
        ("trajectory.threshold", 1.5),
        ("trajectory.interpolation", "spline"),
        ("trajectory.measurement_noise", 0.0),
        ("kinematics.gravity_sign", 0.5),
        ("postprocess.map_scope", "subject"),
        ("train.overlap", 1.0),
        ("train.batch_size", 0),
        ("network.kernel_size", 0),
    ],
)
def test_validate_rejects(key, value):
    with pytest.raises(ConfigError):
        apply_overrides(PipelineConfig(), {key: value}).validate()


def test_train_config_window_must_hold_five_samples():
    with pytest.raises(ConfigError, match="fewer than 5"):
        TrainConfig(window_sec=0.05).validate(60.0)


def test_network_input_dim():
    assert NetworkConfig().input_dim == 27
    assert NetworkConfig(with_orientation=True).input_dim == 31
    assert NetworkConfig.from_dict(NetworkConfig(hidden_size=7).to_dict()) == NetworkConfig(hidden_size=7)
