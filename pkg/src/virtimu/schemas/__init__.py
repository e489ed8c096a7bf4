from .har import HarExportMeta
from .sensor import RotationEntry, SensorSpecDoc
from .tracks import RegionEntry, TrackManifest
from .weights import ParameterEntry, WeightsManifest

__all__ = [
    "HarExportMeta",
    "ParameterEntry",
    "RegionEntry",
    "RotationEntry",
    "SensorSpecDoc",
    "TrackManifest",
    "WeightsManifest",
]
