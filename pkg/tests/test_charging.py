"""Charging policy parameters and per-parking decisions."""

from __future__ import annotations

from datetime import datetime, timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bevsim.charging import (
    ChargeDecision,
    ChargingPolicy,
    WeeklyWindow,
    charge_decision,
    charge_delivered,
    scenario,
    weekday_of_epoch_day,
)
from bevsim.ingest import to_epoch_s
from conftest import parking


class TestScenarios:
    def test_scenario_1(self):
        p = scenario(1)
        assert p.power_kw == 7.4
        assert p.soc_trigger == 0.75
        assert p.min_duration_s == 6 * 3600
        assert p.window.days == frozenset(range(5))  # Monday..Friday
        assert p.window.start_s == 8 * 3600
        assert p.window.end_s == 20 * 3600

    def test_scenario_2(self):
        p = scenario(2)
        assert p.power_kw == 7.4
        assert p.soc_trigger == 0.25
        assert p.min_duration_s == 6 * 3600
        assert p.window is None

    def test_scenario_3_crosses_midnight_all_days(self):
        p = scenario(3)
        assert p.power_kw == 7.4
        assert p.soc_trigger == 0.75
        assert p.min_duration_s == 6 * 3600
        assert p.window.days == frozenset(range(7))
        assert p.window.start_s == 20 * 3600
        assert p.window.end_s == 8 * 3600
        assert p.window.length_s == 12 * 3600

    def test_scenario_4(self):
        p = scenario(4)
        assert p.power_kw == 50.0
        assert p.soc_trigger == 0.25
        assert p.min_duration_s == 1200
        assert p.window is None

    @pytest.mark.parametrize("n", [0, 5, -1])
    def test_out_of_range(self, n):
        with pytest.raises(ValueError):
            scenario(n)


def test_weekday_helper():
    # 1970-01-01 (day 0) was a Thursday
    assert weekday_of_epoch_day(0) == 3
    # 2024-03-04 was a Monday
    day = to_epoch_s(datetime(2024, 3, 4)) // 86400
    assert weekday_of_epoch_day(day) == 0


class TestChargeDecision:
    def test_s3_overnight_charges(self):
        # 2024-03-01 is a Friday; parked 19:00 -> 09:00 next day
        p = parking("u", "2024-03-01T19:00:00", "2024-03-02T09:00:00")
        d = charge_decision(scenario(3), p, 0.60)
        assert d is not None
        assert d.begin_ts == datetime(2024, 3, 1, 20, 0, 0)
        assert d.latest_end_ts == datetime(2024, 3, 2, 8, 0, 0)

    def test_s3_short_overlap_rejected(self):
        # 21:00 -> 02:00 gives only 5 h inside the nightly window
        p = parking("u", "2024-03-01T21:00:00", "2024-03-02T02:00:00")
        assert charge_decision(scenario(3), p, 0.10) is None

    def test_s2_trigger_not_met(self):
        p = parking("u", "2024-03-01T10:00:00", "2024-03-01T18:00:00")
        assert charge_decision(scenario(2), p, 0.30) is None

    def test_s2_trigger_boundary_is_strict(self):
        p = parking("u", "2024-03-01T10:00:00", "2024-03-01T18:00:00")
        assert charge_decision(scenario(2), p, 0.25) is None
        assert charge_decision(scenario(2), p, 0.2499999) is not None

    def test_s4_short_stop_charges_whole_parking(self):
        p = parking("u", "2024-03-01T10:00:00", "2024-03-01T10:25:00")
        d = charge_decision(scenario(4), p, 0.10)
        assert d == ChargeDecision(p.start_ts, p.end_ts)

    def test_s4_below_min_duration(self):
        p = parking("u", "2024-03-01T10:00:00", "2024-03-01T10:19:00")
        assert charge_decision(scenario(4), p, 0.10) is None

    def test_s1_weekend_never_qualifies(self):
        # 2024-03-02 is a Saturday; long daytime parking, but no weekday window
        p = parking("u", "2024-03-02T08:00:00", "2024-03-02T20:00:00")
        assert charge_decision(scenario(1), p, 0.10) is None

    def test_s1_weekday_daytime_qualifies(self):
        p = parking("u", "2024-03-04T08:30:00", "2024-03-04T17:00:00")  # Monday
        d = charge_decision(scenario(1), p, 0.10)
        assert d is not None
        assert d.begin_ts == datetime(2024, 3, 4, 8, 30, 0)
        assert d.latest_end_ts == datetime(2024, 3, 4, 17, 0, 0)

    def test_midnight_window_belongs_to_start_day(self):
        # Monday-only nightly window; the parking lies entirely on Tuesday
        # morning but inside the instance that STARTED Monday evening.
        window = WeeklyWindow(frozenset({0}), 20 * 3600, 8 * 3600)
        policy = ChargingPolicy("mon-night", 7.4, 0.75, 6 * 3600, window)
        p = parking("u", "2024-03-05T00:30:00", "2024-03-05T07:00:00")  # Tuesday 00:30
        d = charge_decision(policy, p, 0.10)
        assert d is not None
        assert d.begin_ts == p.start_ts and d.latest_end_ts == p.end_ts
        # The same parking shifted to Wednesday morning has no Monday instance.
        p2 = parking("u", "2024-03-06T00:30:00", "2024-03-06T07:00:00")
        assert charge_decision(policy, p2, 0.10) is None

    def test_earliest_of_two_window_instances_wins(self):
        # Friday 19:00 -> Sunday 12:00 spans two nightly instances; the
        # session is placed in the first (Friday night), never the second.
        p = parking("u", "2024-03-01T19:00:00", "2024-03-03T12:00:00")
        d = charge_decision(scenario(3), p, 0.50)
        assert d.begin_ts == datetime(2024, 3, 1, 20, 0, 0)
        assert d.latest_end_ts == datetime(2024, 3, 2, 8, 0, 0)


class TestChargeDelivered:
    def test_fills_before_window_ends(self):
        # 6 h at 7.4 kW could deliver 44.4 kWh; an empty 40 kWh pack fills
        # first, after 40 / 7.4 hours.
        policy = scenario(2)
        d = ChargeDecision(datetime(2024, 3, 1, 20), datetime(2024, 3, 2, 2))
        energy, end = charge_delivered(policy, d, 0.0, 40.0)
        assert energy == pytest.approx(40.0, abs=1e-9)
        expected_end = d.begin_ts + timedelta(hours=40.0 / 7.4)
        assert abs((end - expected_end).total_seconds()) < 1e-3

    def test_capped_by_capacity(self):
        policy = scenario(4)
        d = ChargeDecision(datetime(2024, 3, 1, 10), datetime(2024, 3, 1, 10, 20))
        energy, _ = charge_delivered(policy, d, 5.0, 21.3)
        # min(50 kW x 1/3 h, 21.3 - 5) = min(16.667, 16.3)
        assert energy == pytest.approx(16.3, abs=1e-9)

    def test_full_battery_draws_nothing(self):
        policy = scenario(2)
        d = ChargeDecision(datetime(2024, 3, 1, 20), datetime(2024, 3, 2, 2))
        energy, end = charge_delivered(policy, d, 40.0, 40.0)
        assert energy == 0.0
        assert end == d.begin_ts


class TestValidation:
    def test_window_rejects_equal_times(self):
        with pytest.raises(ValueError):
            WeeklyWindow(frozenset({0}), 3600, 3600)

    def test_window_rejects_bad_days(self):
        with pytest.raises(ValueError):
            WeeklyWindow(frozenset({7}), 0, 3600)

    def test_policy_rejects_bad_trigger(self):
        for trigger in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                ChargingPolicy("bad", 7.4, trigger, 3600)

    def test_from_times_parses_day_names(self):
        w = WeeklyWindow.from_times(["mon", "Tue", "WED", 3, 4], "08:00", "20:00")
        assert w.days == frozenset(range(5))
        assert w.start_s == 8 * 3600 and w.end_s == 20 * 3600


# ---------------------------------------------------------------------------
# Properties

WEEK_S = 7 * 86400
_anchor = to_epoch_s(datetime(2024, 3, 1))


@given(
    scenario_n=st.integers(1, 4),
    start=st.integers(_anchor, _anchor + WEEK_S),
    duration=st.integers(60, 3 * 86400),
    soc_fraction=st.floats(0, 1, allow_nan=False),
    weeks=st.integers(-3, 3),
)
@settings(max_examples=200, deadline=None)
def test_property_week_shift_invariance(scenario_n, start, duration, soc_fraction, weeks):
    from bevsim.ingest import from_epoch_s

    policy = scenario(scenario_n)
    p1 = parking("u", from_epoch_s(start).isoformat(), from_epoch_s(start + duration).isoformat())
    shifted_start = start + weeks * WEEK_S
    p2 = parking(
        "u",
        from_epoch_s(shifted_start).isoformat(),
        from_epoch_s(shifted_start + duration).isoformat(),
    )
    d1 = charge_decision(policy, p1, soc_fraction)
    d2 = charge_decision(policy, p2, soc_fraction)
    if d1 is None:
        assert d2 is None
    else:
        assert d2 is not None
        delta = timedelta(weeks=weeks)
        assert d2.begin_ts == d1.begin_ts + delta
        assert d2.latest_end_ts == d1.latest_end_ts + delta


@given(
    scenario_n=st.integers(1, 4),
    start=st.integers(_anchor, _anchor + WEEK_S),
    duration=st.integers(60, 3 * 86400),
    extension=st.integers(0, 86400),
    soc_fraction=st.floats(0, 1, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_property_decision_contained_and_monotone(
    scenario_n, start, duration, extension, soc_fraction
):
    from bevsim.ingest import from_epoch_s

    policy = scenario(scenario_n)
    p = parking("u", from_epoch_s(start).isoformat(), from_epoch_s(start + duration).isoformat())
    d = charge_decision(policy, p, soc_fraction)
    if d is not None:
        assert p.start_ts <= d.begin_ts <= d.latest_end_ts <= p.end_ts
        assert (d.latest_end_ts - d.begin_ts).total_seconds() >= policy.min_duration_s
    if policy.window is None and d is not None:
        longer = parking(
            "u",
            from_epoch_s(start).isoformat(),
            from_epoch_s(start + duration + extension).isoformat(),
        )
        assert charge_decision(policy, longer, soc_fraction) is not None
