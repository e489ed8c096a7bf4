from .bundle import SimulatorWeights, WeightBundle, init_weights, load_bundle, load_simulator, save_bundle, save_simulator, zero_weights
from .config import NetworkConfig, TrainConfig
from .gradcheck import GradCheckReport, check_gradient
from .network import backward, forward, loss_and_gradient, param_shapes
from .train import train
from .windows import WindowSet, build_windows, concat_windows, feature_stats, region_features

__all__ = [
    "GradCheckReport",
    "NetworkConfig",
    "SimulatorWeights",
    "TrainConfig",
    "WeightBundle",
    "WindowSet",
    "backward",
    "build_windows",
    "check_gradient",
    "concat_windows",
    "feature_stats",
    "forward",
    "init_weights",
    "load_bundle",
    "load_simulator",
    "loss_and_gradient",
    "param_shapes",
    "region_features",
    "save_bundle",
    "save_simulator",
    "train",
    "zero_weights",
]
