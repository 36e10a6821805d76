"""Reinforcement learning in drifting tabular MDPs.

Sliding-window optimistic planning with confidence widening, a bandit-tuned
parameter-free wrapper, exact per-slice oracles and a dynamic-regret harness.
"""
from .kernels import BACKEND
from .mdp import (
    GainBias,
    TimeVaryingMDP,
    diameter,
    optimal_gain,
    oracle_gains,
    step,
    validate_instance,
    variation_budgets,
)
from .evi import extended_value_iteration, inner_max_distribution
from .sliding import WindowBuffer, build_regions

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GainBias", "TimeVaryingMDP", "WindowBuffer", "build_regions", "diameter",
    "extended_value_iteration", "inner_max_distribution", "optimal_gain", "oracle_gains", "step",
    "validate_instance", "variation_budgets",
]
