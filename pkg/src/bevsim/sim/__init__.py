"""Trip-replay simulation engine (compiled kernel with pure-Python fallback)."""

from .engine import (
    CONSERVATION_TOL_KWH,
    ENGINE,
    TOL_KWH,
    ChargeEvent,
    SimulationResult,
    TimelineError,
    TripOutcome,
    policy_kernel_params,
    simulate_matrix,
    simulate_timeline,
    simulate_user,
)

__all__ = [
    "CONSERVATION_TOL_KWH",
    "ENGINE",
    "TOL_KWH",
    "ChargeEvent",
    "SimulationResult",
    "TimelineError",
    "TripOutcome",
    "policy_kernel_params",
    "simulate_matrix",
    "simulate_timeline",
    "simulate_user",
]
