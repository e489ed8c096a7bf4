from __future__ import annotations

from typing import Optional, Tuple

from virtimu.core.config import KinematicsConfig
from virtimu.core.rotations import as_rotation
from virtimu.core.types import ImuSeries, SensorSpec, SkeletonAnimation
from virtimu.kinematics.analytic import motion_boundary, resample_imu
from virtimu.kinematics.derivatives import richardson_second_derivative
from virtimu.kinematics.frames import to_sensor_frame
from virtimu.kinematics.triads import angular_velocity
from virtimu.motion_io.bvh import joint_trajectory


def simulate_skeleton(
    anim: SkeletonAnimation,
    joint: str,
    spec: SensorSpec,
    cfg: Optional[KinematicsConfig] = None,
) -> Tuple[ImuSeries, ImuSeries]:
    """Analytic IMU for a sensor rigidly attached to a skeleton joint.

    The joint's global orientation plays the role of R_B^G; positions come from forward
    kinematics in the file's own length units.
    """
    cfg = cfg or KinematicsConfig()
    positions, quats = joint_trajectory(anim, joint)
    rate = anim.sample_rate
    accel = richardson_second_derivative(positions, rate)
    a_g = accel.values
    boundary = motion_boundary(accel.boundary)
    omega_g = angular_velocity(as_rotation(quats).as_matrix(), rate)
    sensor = to_sensor_frame(a_g, omega_g, quats, spec, gravity_sign=cfg.gravity_sign, sample_rate=rate)
    sensor.boundary = boundary
    glob = ImuSeries(frame_tag="global", sample_rate=rate, accel=a_g, gyro=omega_g, boundary=boundary.copy())
    if spec.sample_rate != rate:
        sensor = resample_imu(sensor, spec.sample_rate)
        glob = resample_imu(glob, spec.sample_rate)
    return sensor, glob
