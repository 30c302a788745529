"""Configuration, persistence, presets and commands for reproducible runs."""

from .cache import clear_cache, mode_cache, set_cache_enabled
from .commands import cmd_ddi, cmd_dynamics, cmd_figure, cmd_modes, cmd_rates, run_command
from .config import AtomConfig, FiberConfig, RunConfig, SweepConfig
from .presets import figure_config, figure_ids
from .table import ResultTable

__all__ = [
    "AtomConfig",
    "FiberConfig",
    "ResultTable",
    "RunConfig",
    "SweepConfig",
    "clear_cache",
    "cmd_ddi",
    "cmd_dynamics",
    "cmd_figure",
    "cmd_modes",
    "cmd_rates",
    "figure_config",
    "figure_ids",
    "mode_cache",
    "run_command",
    "set_cache_enabled",
]
