from __future__ import annotations

import pytest

from tests.helpers import identity_sensor, orbit_tracks, static_tracks


@pytest.fixture(autouse=True)
def _isolated_config(monkeypatch, tmp_path):
    """Keep config files and VIRTIMU_* variables from the developer's shell out of tests."""
    for var in ("VIRTIMU_CONFIG", "VIRTIMU_SEED", "VIRTIMU_EPOCHS", "VIRTIMU_LR", "VIRTIMU_CUTOFF_HZ"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def orbit():
    return orbit_tracks()


@pytest.fixture
def static():
    return static_tracks()


@pytest.fixture
def wrist_sensor():
    return identity_sensor()
