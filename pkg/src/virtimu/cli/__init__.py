from .main import build_parser, configure_logging, main
from .runner import run_command

__all__ = ["build_parser", "configure_logging", "main", "run_command"]
