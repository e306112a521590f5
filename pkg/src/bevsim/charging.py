"""Charging policies and the per-parking charge decision.

A policy is declarative: charger power, a state-of-charge trigger (charge
only when the SoC fraction is strictly below it), a minimum qualifying
interval, and an eligibility window (any time, or a weekly recurring window).
At most one charging session happens per parking event.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

from .ingest import ParkingEvent, from_epoch_s, to_epoch_s

DAY_S = 86400
WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


@dataclass(frozen=True)
class WeeklyWindow:
    """Recurring weekly eligibility window.

    An instance whose end time is at or before its start time crosses
    midnight and belongs to the weekday on which it starts.
    """

    days: frozenset[int]  # 0 = Monday .. 6 = Sunday
    start_s: int  # seconds from midnight
    end_s: int

    def __post_init__(self) -> None:
        if not all(0 <= d <= 6 for d in self.days):
            raise ValueError(f"weekdays must be 0..6, got {sorted(self.days)}")
        if not (0 <= self.start_s < DAY_S and 0 <= self.end_s < DAY_S):
            raise ValueError("window times must lie within one day")
        if self.start_s == self.end_s:
            raise ValueError("window start and end must differ")

    @property
    def length_s(self) -> int:
        return (self.end_s - self.start_s) % DAY_S

    @classmethod
    def from_times(cls, days, start: str, end: str) -> "WeeklyWindow":
        """Build from weekday names/numbers and HH:MM strings."""
        day_set = frozenset(
            d if isinstance(d, int) else WEEKDAY_NAMES.index(str(d).strip().lower()[:3])
            for d in days
        )
        return cls(day_set, _parse_hhmm(start), _parse_hhmm(end))


def _parse_hhmm(text: str) -> int:
    h, m = text.strip().split(":")
    h, m = int(h), int(m)
    if not (0 <= h < 24 and 0 <= m < 60):
        raise ValueError(f"bad time of day {text!r}")
    return h * 3600 + m * 60


@dataclass(frozen=True)
class ChargingPolicy:
    name: str
    power_kw: float
    soc_trigger: float  # charge only while SoC fraction < this, strictly
    min_duration_s: int
    window: WeeklyWindow | None = None  # None: eligible at any time

    def __post_init__(self) -> None:
        if self.power_kw <= 0:
            raise ValueError("charger power must be > 0")
        if self.min_duration_s <= 0:
            raise ValueError("minimum duration must be > 0")
        if not (0.0 < self.soc_trigger <= 1.0):
            raise ValueError("SoC trigger must be in (0, 1]")


@dataclass(frozen=True)
class ChargeDecision:
    """The interval within a parking event during which the charger is connected."""

    begin_ts: datetime
    latest_end_ts: datetime


def scenario(n: int) -> ChargingPolicy:
    """One of the four canned charging behaviours.

    1: workplace AC   - 7.4 kW, Mon-Fri 08:00-20:00, >= 6 h parked, SoC < 75%
    2: frugal AC      - 7.4 kW, any time, >= 6 h parked, SoC < 25%
    3: overnight AC   - 7.4 kW, nightly 20:00-08:00, >= 6 h in window, SoC < 75%
    4: DC fast        - 50 kW, any time, >= 20 min parked, SoC < 25%
    """
    if n == 1:
        return ChargingPolicy(
            "scenario1", 7.4, 0.75, 6 * 3600,
            WeeklyWindow(frozenset(range(5)), 8 * 3600, 20 * 3600),
        )
    if n == 2:
        return ChargingPolicy("scenario2", 7.4, 0.25, 6 * 3600, None)
    if n == 3:
        return ChargingPolicy(
            "scenario3", 7.4, 0.75, 6 * 3600,
            WeeklyWindow(frozenset(range(7)), 20 * 3600, 8 * 3600),
        )
    if n == 4:
        return ChargingPolicy("scenario4", 50.0, 0.25, 20 * 60, None)
    raise ValueError(f"scenario number must be 1..4, got {n}")


def weekday_of_epoch_day(day: int) -> int:
    """Weekday (0 = Monday) of a civil day number; day 0 is a Thursday."""
    # The +10 keeps the result correct under C truncated modulo as well, so
    # the compiled kernel can use the identical expression.
    return ((day % 7) + 10) % 7


def earliest_window_overlap(
    window: WeeklyWindow, p0: int, p1: int, min_duration_s: int
) -> tuple[int, int] | None:
    """Earliest intersection of [p0, p1] with one window instance, if one is
    at least min_duration_s long.

    Instances are never merged: a parking spanning several window instances
    charges at most once, in the first instance whose overlap qualifies.
    """
    length = window.length_s
    day = (p0 - length) // DAY_S  # earlier instances cannot reach into the parking
    last_day = p1 // DAY_S
    while day <= last_day:
        if weekday_of_epoch_day(day) in window.days:
            w0 = day * DAY_S + window.start_s
            if w0 >= p1:
                return None
            o0 = max(p0, w0)
            o1 = min(p1, w0 + length)
            if o1 - o0 >= min_duration_s:
                return o0, o1
        day += 1
    return None


def charge_decision(
    policy: ChargingPolicy, parking: ParkingEvent, soc_fraction_at_eval: float
) -> ChargeDecision | None:
    """Whether and when this parking event charges; None means no charge.

    The SoC trigger is evaluated once, at the interval that would begin the
    session (the parking start for any-time policies, the window-overlap
    start otherwise). SoC does not change while parked and not charging, so
    the caller's current fraction is the fraction at that instant.
    """
    p0, p1 = to_epoch_s(parking.start_ts), to_epoch_s(parking.end_ts)
    if policy.window is None:
        if p1 - p0 >= policy.min_duration_s and soc_fraction_at_eval < policy.soc_trigger:
            return ChargeDecision(parking.start_ts, parking.end_ts)
        return None
    overlap = earliest_window_overlap(policy.window, p0, p1, policy.min_duration_s)
    if overlap is not None and soc_fraction_at_eval < policy.soc_trigger:
        return ChargeDecision(from_epoch_s(overlap[0]), from_epoch_s(overlap[1]))
    return None


def charge_delivered(
    policy: ChargingPolicy, decision: ChargeDecision, soc_kwh: float, capacity_kwh: float
) -> tuple[float, datetime]:
    """Energy delivered (kWh) and the instant charging actually stops.

    Constant power for the whole session; the session ends at the decision
    interval's end or when the battery is full, whichever comes first.
    """
    hours = (decision.latest_end_ts - decision.begin_ts) / timedelta(hours=1)
    potential = policy.power_kw * hours
    room = max(0.0, capacity_kwh - soc_kwh)
    energy = room if potential >= room else potential
    end_ts = decision.begin_ts + timedelta(hours=energy / policy.power_kw)
    return energy, end_ts
