"""bevsim: replay recorded combustion-car trips against BEV energy models
and charging policies, reporting feasibility, charging burden, and state of
charge."""

__version__ = "0.1.0"

from .charging import ChargeDecision, ChargingPolicy, WeeklyWindow, charge_decision, charge_delivered, scenario
from .energy import VehicleSpec, builtin_vehicles, trip_energy, vehicle_by_name
from .ingest import (
    CleaningReport,
    Diagnostic,
    ParkingEvent,
    TripRecord,
    UserTimeline,
    clean_user_trips,
    derive_parkings,
    filter_trips,
    merge_short_parkings,
    parse_trip_log,
    sort_and_validate_user,
)
from .metrics import (
    DistributionSummary,
    UserCharacterization,
    UserMetrics,
    aggregate,
    characterize_user,
    scenario_vehicle_matrix,
    user_metrics,
)
from .sim import ENGINE, ChargeEvent, SimulationResult, TripOutcome, simulate_matrix, simulate_user
from .synthgen import GeneratorProfile, ViolationCounts, generate, preset_profiles
