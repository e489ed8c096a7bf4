from .export import IMU_CHANNELS, export_har
from .filters import lowpass
from .mapping import MAP_SCOPES, distribution_map, map_recordings
from .normalize import NormalizationStats, denormalize, normalize
from .windows import har_windows, window_labels

__all__ = [
    "IMU_CHANNELS",
    "MAP_SCOPES",
    "NormalizationStats",
    "denormalize",
    "distribution_map",
    "export_har",
    "har_windows",
    "lowpass",
    "map_recordings",
    "normalize",
    "window_labels",
]
