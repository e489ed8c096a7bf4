from .bvh import forward_kinematics, joint_trajectory, load_bvh, parse_bvh, serialize_bvh, store_bvh
from .imu_csv import read_imu_csv, write_imu_csv
from .sensor import load_sensor_spec, store_sensor_spec
from .tracks import load_track_set, store_track_set, track_paths

__all__ = [
    "forward_kinematics",
    "joint_trajectory",
    "load_bvh",
    "load_sensor_spec",
    "load_track_set",
    "parse_bvh",
    "read_imu_csv",
    "serialize_bvh",
    "store_bvh",
    "store_sensor_spec",
    "store_track_set",
    "track_paths",
    "write_imu_csv",
]
