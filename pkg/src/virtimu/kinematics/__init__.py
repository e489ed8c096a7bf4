from .analytic import region_motion, resample_imu, simulate_analytic
from .augment import random_rotation_augment
from .derivatives import DerivativeResult, central_second_derivative, richardson_second_derivative
from .frames import from_sensor_frame, to_sensor_frame
from .triads import TriangleTriad, angular_velocity, triangle_triad

__all__ = [
    "DerivativeResult",
    "TriangleTriad",
    "angular_velocity",
    "central_second_derivative",
    "from_sensor_frame",
    "random_rotation_augment",
    "region_motion",
    "resample_imu",
    "richardson_second_derivative",
    "simulate_analytic",
    "to_sensor_frame",
    "triangle_triad",
]
