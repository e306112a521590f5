"""Vehicle specifications and segmentation-based trip energy.

Consumption is billed per road category: urban and highway kilometres use
their own rates, extra-urban kilometres use the combined rate (the only
remaining figure a spec sheet provides). Rates are constant: no temperature,
load or taper effects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .ingest import TripRecord


@dataclass(frozen=True)
class VehicleSpec:
    name: str
    usable_kwh: float  # usable net battery capacity
    wh_per_km_urban: float
    wh_per_km_highway: float
    wh_per_km_combined: float
    range_km: float = 0.0  # manufacturer estimate, informational only

    def __post_init__(self) -> None:
        if self.usable_kwh <= 0:
            raise ValueError(f"{self.name!r}: usable capacity must be > 0")
        if min(self.wh_per_km_urban, self.wh_per_km_highway, self.wh_per_km_combined) <= 0:
            raise ValueError(f"{self.name!r}: consumption rates must be > 0")
        # No ordering between the three rates is assumed or enforced; they
        # are independent data points from the spec sheet.


# Four production models spanning the capacity spectrum, small city car to
# large sedan. Capacities in kWh, rates in Wh/km (urban / highway / combined).
_BUILTIN = (
    VehicleSpec("Fiat 500e", 21.3, 101.0, 170.0, 133.0, 135.0),
    VehicleSpec("Renault Megane E-Tech", 40.0, 103.0, 167.0, 133.0, 260.0),
    VehicleSpec("Tesla Model 3", 57.5, 93.0, 142.0, 116.0, 420.0),
    VehicleSpec("Audi A6 e-tron", 94.9, 109.0, 161.0, 134.0, 610.0),
)


def builtin_vehicles() -> tuple[VehicleSpec, ...]:
    """The four compiled-in vehicle models."""
    return _BUILTIN


def vehicle_by_name(name: str) -> VehicleSpec:
    for spec in _BUILTIN:
        if spec.name == name:
            return spec
    raise KeyError(f"unknown vehicle {name!r}; built-ins: {[s.name for s in _BUILTIN]}")


def trip_energy(spec: VehicleSpec, trip: "TripRecord") -> float:
    """Energy drawn by one trip, in kWh."""
    return (
        trip.km_urban * spec.wh_per_km_urban
        + trip.km_extraurban * spec.wh_per_km_combined
        + trip.km_highway * spec.wh_per_km_highway
    ) / 1000.0


def trip_energies(
    spec: VehicleSpec,
    km_urban: np.ndarray,
    km_extraurban: np.ndarray,
    km_highway: np.ndarray,
) -> np.ndarray:
    """Vectorized trip_energy over per-category distance arrays.

    Same expression and operation order as the scalar form, so both produce
    bit-identical values.
    """
    return (
        km_urban * spec.wh_per_km_urban
        + km_extraurban * spec.wh_per_km_combined
        + km_highway * spec.wh_per_km_highway
    ) / 1000.0
