"""Max-min fair resource allocation for slotted-ALOHA backscatter networks."""

from .bcd import SolveState, greedy_tas, inner_bcd
from .cap import solve_cap
from .channel import ChannelRealization, trial_channels
from .config import ConfigError, EHParams, SystemConfig, parse_config, render_config
from .energy import eh_inverse, eh_transfer
from .montecarlo import run_trials, simulate_access
from .report import TrialReport, emit_csv

__all__ = [
    "ChannelRealization", "ConfigError", "EHParams", "SolveState", "SystemConfig", "TrialReport",
    "eh_inverse", "eh_transfer", "emit_csv", "greedy_tas", "inner_bcd", "parse_config",
    "render_config", "run_trials", "simulate_access", "solve_cap", "trial_channels",
]
