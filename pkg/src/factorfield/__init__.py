"""Pairwise entanglement of cyclic spin-1/2 XYZ chains near the factorizing field."""

from .chain import ChainSpec, full_range, nearest_neighbor_range
from .closed_forms import (
    block_entanglement,
    factorization_point,
    mixture_concurrence,
    rescaled_asymptotics,
    side_limits,
)
from .concurrence import PairCorrelators, concurrence_from_correlators, wootters_concurrence
from .errors import ChainError, ConfigError
from .scan import RunConfig, emit, fig1_curves, run_scan, thermal_scan

__version__ = "0.1.0"

__all__ = [
    "ChainError",
    "ChainSpec",
    "ConfigError",
    "PairCorrelators",
    "RunConfig",
    "block_entanglement",
    "concurrence_from_correlators",
    "emit",
    "factorization_point",
    "fig1_curves",
    "full_range",
    "mixture_concurrence",
    "nearest_neighbor_range",
    "rescaled_asymptotics",
    "run_scan",
    "side_limits",
    "thermal_scan",
    "wootters_concurrence",
]
