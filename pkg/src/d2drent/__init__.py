"""Slotted simulator of a single cell where C-UEs rent spectrum to D2D pairs
in OMA or NOMA mode, with a threshold-bandit mode-selection policy."""

from .config import (
    BanditParams,
    ConfigError,
    EconomicParams,
    ExperimentParams,
    Mode,
    RadioParams,
    SimConfig,
    default_config,
    load_config,
    serialize_config,
)
from .engine import McSummary, run_episode, run_monte_carlo
from .policy import PolicyKind, Threshold, compute_threshold, switch_slot

__all__ = [
    "BanditParams",
    "ConfigError",
    "EconomicParams",
    "ExperimentParams",
    "McSummary",
    "Mode",
    "PolicyKind",
    "RadioParams",
    "SimConfig",
    "Threshold",
    "compute_threshold",
    "default_config",
    "load_config",
    "run_episode",
    "run_monte_carlo",
    "serialize_config",
    "switch_slot",
]
