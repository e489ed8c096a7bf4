"""virtimu: virtual IMU readings from human motion tracks."""

__version__ = "0.1.0"

# On-disk formats this build reads and writes
FORMAT_VERSIONS = {
    "tracks": 1,
    "sensor": 1,
    "weights": 1,
    "imu_csv": 1,
    "har_export": 1,
}
