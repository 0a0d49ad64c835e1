"""Discrete phase-shift selection for intelligent reflecting surfaces."""

from .baselines import brute_force, cpp_ratio_bound, sdr_ratio_bound, solve_cpp
from .binary import detect_rank, solve_binary_optimal, solve_rank_one
from .core import (
    BeamConfig,
    BudgetExceededError,
    Channel,
    DimensionMismatchError,
    Instance,
    PhaseAlphabet,
    continuous_relaxation,
    snr,
    snr_boost,
)
from .kary import apx_ratio_bound, rotate_into_arc, solve_apx, solve_restricted_exact
from .sim import (
    ChannelModelConfig,
    EstimationConfig,
    MonteCarloReport,
    estimate_instance,
    generate_instance,
    run_monte_carlo,
    worst_case_cpp_instance,
)

__version__ = "0.1.0"
