"""Event-driven replay engine.

Replays one user's cleaned trip/parking timeline against a vehicle and a
charging policy, tracking state of charge. Trips are applied atomically
(energy debited at the trip event); decisions only happen at event
boundaries, so this is equivalent to second-by-second replay for every
recorded quantity.

The hot loop lives in a compiled kernel when available; a pure-Python twin
is selected at import otherwise (or when BEVSIM_ENGINE=python is set).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

import numpy as np

from ..charging import ChargingPolicy
from ..energy import VehicleSpec, trip_energies
from ..ingest import Diagnostic, ParkingEvent, TripRecord, UserTimeline, from_epoch_s

if os.environ.get("BEVSIM_ENGINE", "").lower() in ("python", "pure"):
    from . import _pykernel as _impl
else:  # pragma: no cover - exercised via subprocess in tests
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as _impl

ENGINE = _impl.ENGINE
TOL_KWH = 1e-9
CONSERVATION_TOL_KWH = 1e-6


class TimelineError(RuntimeError):
    """The trips/parkings of one user do not form a valid alternating timeline."""

    def __init__(self, user_id: str, detail: str):
        super().__init__(f"user {user_id!r}: {detail}")
        self.user_id = user_id
        self.detail = detail


@dataclass(frozen=True)
class TripOutcome:
    index: int
    energy_required_kwh: float
    soc_before_kwh: float
    soc_after_kwh: float
    feasible: bool


@dataclass(frozen=True)
class ChargeEvent:
    begin_ts: datetime
    end_ts: datetime
    energy_kwh: float  # always > 0; zero-energy sessions are not events


@dataclass
class SimulationResult:
    """Per-trip SoC trace and charge ledger for one user x vehicle x policy run."""

    user_id: str
    vehicle: str
    policy: str
    capacity_kwh: float
    initial_soc_kwh: float
    final_soc_kwh: float
    energy_kwh: np.ndarray
    soc_before_kwh: np.ndarray
    soc_after_kwh: np.ndarray
    feasible: np.ndarray  # uint8 flags, one per trip
    charge_begin_s: np.ndarray
    charge_end_s: np.ndarray
    charge_kwh: np.ndarray

    @property
    def n_trips(self) -> int:
        return len(self.energy_kwh)

    @property
    def n_feasible(self) -> int:
        return int(np.count_nonzero(self.feasible))

    @property
    def n_charges(self) -> int:
        return len(self.charge_kwh)

    @property
    def trip_outcomes(self) -> tuple[TripOutcome, ...]:
        return tuple(
            TripOutcome(
                i,
                float(self.energy_kwh[i]),
                float(self.soc_before_kwh[i]),
                float(self.soc_after_kwh[i]),
                bool(self.feasible[i]),
            )
            for i in range(self.n_trips)
        )

    @property
    def charge_events(self) -> tuple[ChargeEvent, ...]:
        return tuple(
            ChargeEvent(
                from_epoch_s(float(self.charge_begin_s[i])),
                from_epoch_s(float(self.charge_end_s[i])),
                float(self.charge_kwh[i]),
            )
            for i in range(self.n_charges)
        )

    def conservation_residual_kwh(self) -> float:
        """How far the run strays from exact energy bookkeeping.

        final = initial + charged - spent on feasible trips - SoC discarded
        by the clamp on each infeasible trip.
        """
        ok = self.feasible.astype(bool)
        expected = (
            self.initial_soc_kwh
            + float(np.sum(self.charge_kwh))
            - float(np.sum(self.energy_kwh[ok]))
            - float(np.sum(self.soc_before_kwh[~ok]))
        )
        return abs(self.final_soc_kwh - expected)


def policy_kernel_params(policy: ChargingPolicy) -> tuple[bool, int, int, int]:
    """(anytime, day_mask, window_start_s, window_length_s) for the kernels."""
    if policy.window is None:
        return True, 0, 0, 0
    mask = 0
    for d in policy.window.days:
        mask |= 1 << d
    return False, mask, policy.window.start_s, policy.window.length_s


def simulate_timeline(
    timeline: UserTimeline,
    spec: VehicleSpec,
    policy: ChargingPolicy,
    initial_soc_fraction: float = 1.0,
) -> SimulationResult:
    """Replay a validated timeline. The array-native core of the simulator."""
    if not (0.0 <= initial_soc_fraction <= 1.0):
        raise ValueError("initial SoC fraction must be within [0, 1]")
    energy = trip_energies(spec, timeline.km_urban, timeline.km_extraurban, timeline.km_highway)
    anytime, day_mask, win_start, win_len = policy_kernel_params(policy)
    initial = spec.usable_kwh * initial_soc_fraction
    feasible, soc_before, soc_after, cb, ce, ck, final = _impl.replay(
        timeline.start_s,
        timeline.end_s,
        energy,
        spec.usable_kwh,
        initial,
        policy.power_kw,
        policy.soc_trigger,
        policy.min_duration_s,
        anytime,
        day_mask,
        win_start,
        win_len,
    )
    return SimulationResult(
        user_id=timeline.user_id,
        vehicle=spec.name,
        policy=policy.name,
        capacity_kwh=spec.usable_kwh,
        initial_soc_kwh=initial,
        final_soc_kwh=final,
        energy_kwh=energy,
        soc_before_kwh=soc_before,
        soc_after_kwh=soc_after,
        feasible=feasible,
        charge_begin_s=cb,
        charge_end_s=ce,
        charge_kwh=ck,
    )


def _validate_alternation(
    trips: Sequence[TripRecord], parkings: Sequence[ParkingEvent], user_id: str
) -> None:
    if len(parkings) != max(len(trips) - 1, 0):
        raise TimelineError(user_id, f"{len(trips)} trips need {max(len(trips) - 1, 0)} parkings, got {len(parkings)}")
    for i, t in enumerate(trips):
        if t.end_ts <= t.start_ts:
            raise TimelineError(user_id, f"trip {i} ends before it starts")
        if i:
            if trips[i - 1].end_ts > t.start_ts:
                raise TimelineError(user_id, f"trip {i} overlaps its predecessor")
    for i, p in enumerate(parkings):
        if p.start_ts != trips[i].end_ts or p.end_ts != trips[i + 1].start_ts:
            raise TimelineError(user_id, f"parking {i} does not tile the gap between trips {i} and {i + 1}")


def simulate_user(
    trips: Sequence[TripRecord],
    parkings: Sequence[ParkingEvent],
    spec: VehicleSpec,
    policy: ChargingPolicy,
    initial_soc_fraction: float = 1.0,
) -> SimulationResult:
    """Replay one user's trips and parkings chronologically.

    A trip is feasible when its energy fits in the current SoC; otherwise the
    SoC clamps to zero and stays there until a charge. Each parking event is
    offered to the policy exactly once.
    """
    trips = list(trips)
    user_id = trips[0].user_id if trips else ""
    _validate_alternation(trips, list(parkings), user_id)
    return simulate_timeline(UserTimeline.from_trips(trips, user_id), spec, policy, initial_soc_fraction)


def simulate_matrix(
    timelines: Iterable[UserTimeline],
    specs: Sequence[VehicleSpec],
    policies: Sequence[ChargingPolicy],
    initial_soc_fraction: float = 1.0,
) -> tuple[list[SimulationResult], list[Diagnostic]]:
    """Every user x vehicle x policy combination, in deterministic order.

    A user whose timeline is invalid is reported and skipped; other users
    are unaffected. Intended for desk-scale runs; the CLI streams the same
    per-user work and reduces to metrics immediately.
    """
    results: list[SimulationResult] = []
    diags: list[Diagnostic] = []
    for tl in timelines:
        if not tl.is_valid_timeline():
            diags.append(
                Diagnostic(reason="invalid timeline, user skipped", user_id=tl.user_id)
            )
            continue
        for spec in specs:
            for policy in policies:
                results.append(simulate_timeline(tl, spec, policy, initial_soc_fraction))
    return results, diags
