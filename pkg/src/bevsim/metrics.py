"""Per-user metrics, usage characterization, and fleet-level aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ingest import TripRecord, UserTimeline
from .sim.engine import SimulationResult

# 365.25 / 12: with a one-year observation window, charges per month is
# simply charge count / 12.
DAYS_PER_MONTH = 30.4375

SUITABILITY_THRESHOLD_PCT = 99.0


@dataclass(frozen=True)
class UserMetrics:
    feasible_trip_pct: float
    monthly_charges: float
    avg_soc_after_trip_pct: float
    suitable: bool  # at least 99% of trips feasible (boundary inclusive)


@dataclass(frozen=True)
class UserCharacterization:
    """Usage statistics over active days (days with at least one trip)."""

    avg_daily_trips: float
    avg_daily_distance_km: float
    utilization_pct: float  # driving time / 24 h, averaged over active days


@dataclass(frozen=True)
class DistributionSummary:
    count: int
    mean: float
    std: float  # population standard deviation
    minimum: float
    maximum: float
    q1: float
    median: float
    q3: float
    bin_edges: np.ndarray
    mass: np.ndarray  # histogram mass per bin, sums to 1


def user_metrics(result: SimulationResult, observation_days: float) -> UserMetrics:
    """The three per-user metrics for one simulation run.

    The SoC-after-trip average runs over all trips, infeasible ones included
    (they contribute zero).
    """
    if observation_days <= 0:
        raise ValueError("observation_days must be positive")
    if result.n_trips == 0:
        raise ValueError(f"user {result.user_id!r} has no trips; exclude it upstream")
    feasible_pct = 100.0 * result.n_feasible / result.n_trips
    monthly = result.n_charges / (observation_days / DAYS_PER_MONTH)
    avg_soc = float(np.mean(100.0 * result.soc_after_kwh / result.capacity_kwh))
    return UserMetrics(
        feasible_trip_pct=feasible_pct,
        monthly_charges=monthly,
        avg_soc_after_trip_pct=avg_soc,
        suitable=feasible_pct >= SUITABILITY_THRESHOLD_PCT,
    )


def characterize_timeline(tl: UserTimeline) -> UserCharacterization:
    """Array-native characterization of one cleaned user timeline."""
    if tl.n_trips == 0:
        raise ValueError(f"user {tl.user_id!r} has no trips")
    day = tl.start_s // 86400  # a trip belongs to the day it starts on
    firsts = np.flatnonzero(np.concatenate(([True], day[1:] != day[:-1])))
    n_days = len(firsts)
    duration = tl.end_s - tl.start_s
    per_day_duration = np.add.reduceat(duration, firsts)
    return UserCharacterization(
        avg_daily_trips=tl.n_trips / n_days,
        avg_daily_distance_km=float(np.sum(tl.total_km)) / n_days,
        utilization_pct=float(np.mean(100.0 * per_day_duration / 86400.0)),
    )


def characterize_user(trips: Sequence[TripRecord]) -> UserCharacterization:
    """Characterize one user's cleaned, sorted trips."""
    return characterize_timeline(UserTimeline.from_trips(list(trips)))


def aggregate(values: Iterable[float], bins: int = 20) -> DistributionSummary:
    """Distribution summary of per-user values: moments, quartiles, histogram.

    Quartiles interpolate linearly between closest order statistics, the
    histogram spans [min, max] with equal-width bins and unit total mass.
    """
    v = np.asarray(list(values), dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot aggregate zero values")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    q1, median, q3 = np.percentile(v, [25.0, 50.0, 75.0])
    counts, edges = np.histogram(v, bins=bins, range=(float(v.min()), float(v.max())))
    return DistributionSummary(
        count=int(v.size),
        mean=float(np.mean(v)),
        std=float(np.std(v)),
        minimum=float(v.min()),
        maximum=float(v.max()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        bin_edges=edges,
        mass=counts / counts.sum(),
    )


@dataclass(frozen=True)
class MatrixCell:
    policy: str
    vehicle: str
    mean_feasible_trip_pct: float
    mean_avg_soc_after_trip_pct: float
    suitable_user_share: float  # fraction of users meeting the 99% bar
    n_users: int


def matrix_from_rows(
    rows: Iterable[tuple[str, str, str, UserMetrics]],
    policies: Sequence[str],
    vehicles: Sequence[str],
) -> list[MatrixCell]:
    """Aggregate (user, policy, vehicle, metrics) rows into the scenario x
    vehicle table, in the given deterministic order."""
    acc: dict[tuple[str, str], list[UserMetrics]] = {
        (p, vh): [] for p in policies for vh in vehicles
    }
    for _user, policy, vehicle, m in rows:
        key = (policy, vehicle)
        if key not in acc:
            raise ValueError(f"row for unknown combination {key}")
        acc[key].append(m)
    counts = {k: len(ms) for k, ms in acc.items()}
    if min(counts.values(), default=0) == 0:
        missing = [k for k, n in counts.items() if n == 0]
        raise ValueError(f"missing results for combinations: {missing}")
    if len(set(counts.values())) != 1:
        raise ValueError(f"uneven user coverage across combinations: {counts}")
    cells = []
    for p in policies:
        for vh in vehicles:
            ms = acc[(p, vh)]
            cells.append(
                MatrixCell(
                    policy=p,
                    vehicle=vh,
                    mean_feasible_trip_pct=float(np.mean([m.feasible_trip_pct for m in ms])),
                    mean_avg_soc_after_trip_pct=float(
                        np.mean([m.avg_soc_after_trip_pct for m in ms])
                    ),
                    suitable_user_share=sum(m.suitable for m in ms) / len(ms),
                    n_users=len(ms),
                )
            )
    return cells


def scenario_vehicle_matrix(
    results: Iterable[SimulationResult], observation_days: float
) -> list[MatrixCell]:
    """Aggregate simulation results into the policy x vehicle matrix.

    Row order follows first appearance of policies and vehicles in the
    results, which the matrix driver emits deterministically.
    """
    policies: list[str] = []
    vehicles: list[str] = []
    rows = []
    for r in results:
        if r.policy not in policies:
            policies.append(r.policy)
        if r.vehicle not in vehicles:
            vehicles.append(r.vehicle)
        rows.append((r.user_id, r.policy, r.vehicle, user_metrics(r, observation_days)))
    if not rows:
        raise ValueError("no simulation results to aggregate")
    return matrix_from_rows(rows, policies, vehicles)
