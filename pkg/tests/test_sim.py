"""Replay engine: golden trace, clamp semantics, conservation, matrix."""

from __future__ import annotations

from datetime import datetime

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bevsim.charging import ChargingPolicy, scenario
from bevsim.energy import builtin_vehicles
from bevsim.ingest import UserTimeline, derive_parkings, to_epoch_s
from bevsim.sim import TimelineError, simulate_matrix, simulate_timeline, simulate_user
from conftest import parking, trip

# Qualifies on every parking: any time, full-capacity trigger, one-minute
# minimum, absurd power. Used by the "always charge" properties.
GREEDY = ChargingPolicy("greedy", 1e9, 1.0, 60, None)
# Never qualifies: the minimum duration exceeds any parking in these tests.
NEVER = ChargingPolicy("never", 7.4, 1.0, 10**15, None)


def test_golden_fiat_overnight_trace(fiat):
    trips = [
        trip("u", "2024-03-01T18:00:00", "2024-03-01T20:00:00", h=50.0),
        trip("u", "2024-03-02T08:00:00", "2024-03-02T10:00:00", h=135.0),
    ]
    result = simulate_user(trips, derive_parkings(trips), fiat, scenario(3))
    assert result.initial_soc_kwh == 21.3
    outcomes = result.trip_outcomes
    assert [o.feasible for o in outcomes] == [True, False]
    assert outcomes[0].energy_required_kwh == pytest.approx(8.5, abs=1e-12)
    assert outcomes[0].soc_after_kwh == pytest.approx(12.8, abs=1e-9)
    assert outcomes[1].soc_before_kwh == pytest.approx(21.3, abs=1e-9)
    assert outcomes[1].soc_after_kwh == 0.0
    assert result.final_soc_kwh == 0.0
    events = result.charge_events
    assert len(events) == 1
    assert events[0].begin_ts == datetime(2024, 3, 1, 20, 0, 0)
    assert events[0].energy_kwh == pytest.approx(8.5, abs=1e-9)


def test_empty_trip_list(fiat):
    result = simulate_user([], [], fiat, scenario(3))
    assert result.n_trips == 0
    assert result.charge_events == ()
    assert result.final_soc_kwh == result.initial_soc_kwh == 21.3


def test_pure_discharge_strictly_decreasing(tesla):
    trips = [
        trip("u", f"2024-03-0{d}T08:00:00", f"2024-03-0{d}T09:00:00", e=40.0)
        for d in range(1, 6)
    ]
    result = simulate_user(trips, derive_parkings(trips), tesla, NEVER)
    socs = [result.initial_soc_kwh] + [o.soc_after_kwh for o in result.trip_outcomes]
    assert all(b < a for a, b in zip(socs, socs[1:]))
    assert all(o.feasible for o in result.trip_outcomes)
    assert result.n_charges == 0


def test_exact_boundary_trip_is_feasible(fiat):
    # 21.3 kWh remaining, trip needs exactly 21.3 kWh: physically completable
    trips = [trip("u", "2024-03-01T08:00:00", "2024-03-01T11:00:00", e=21300 / 133.0)]
    result = simulate_user(trips, [], fiat, NEVER)
    assert result.trip_outcomes[0].feasible
    assert result.trip_outcomes[0].soc_after_kwh == pytest.approx(0.0, abs=1e-9)


def test_infeasible_then_charge_recovers(fiat):
    trips = [
        trip("u", "2024-03-01T10:00:00", "2024-03-01T12:00:00", h=150.0),  # 25.5 kWh > 21.3
        trip("u", "2024-03-02T10:00:00", "2024-03-02T11:00:00", u=10.0),
    ]
    result = simulate_user(trips, derive_parkings(trips), fiat, scenario(3))
    outcomes = result.trip_outcomes
    assert not outcomes[0].feasible and outcomes[0].soc_after_kwh == 0.0
    # overnight charge refills from empty, next trip feasible
    assert outcomes[1].feasible
    assert result.n_charges == 1


def test_timeline_validation(fiat):
    t1 = trip("u", "2024-03-01T08:00:00", "2024-03-01T09:00:00", u=5)
    t2 = trip("u", "2024-03-01T10:00:00", "2024-03-01T11:00:00", u=5)
    with pytest.raises(TimelineError):
        simulate_user([t1, t2], [], fiat, scenario(3))
    bad_parking = parking("u", "2024-03-01T09:00:00", "2024-03-01T09:59:59")
    with pytest.raises(TimelineError):
        simulate_user([t1, t2], [bad_parking], fiat, scenario(3))
    overlapping = [t1, trip("u", "2024-03-01T08:30:00", "2024-03-01T09:30:00", u=1)]
    dummy = parking("u", "2024-03-01T09:30:00", "2024-03-01T09:30:00")
    with pytest.raises(TimelineError):
        simulate_user(overlapping, [dummy], fiat, scenario(3))


def test_simulate_matrix_cardinality_and_determinism():
    specs = builtin_vehicles()
    policies = [scenario(i) for i in (1, 2, 3, 4)]
    timelines = []
    for uid in ("a", "b"):
        trips = [
            trip(uid, "2024-03-01T08:00:00", "2024-03-01T09:00:00", e=30.0),
            trip(uid, "2024-03-01T12:00:00", "2024-03-01T13:00:00", e=40.0),
        ]
        timelines.append(UserTimeline.from_trips(trips))
    r1, d1 = simulate_matrix(timelines, specs, policies)
    r2, d2 = simulate_matrix(timelines, specs, policies)
    assert len(r1) == 2 * 4 * 4 and d1 == []
    keys = [(r.user_id, r.vehicle, r.policy) for r in r1]
    assert keys == [(r.user_id, r.vehicle, r.policy) for r in r2]
    for a, b in zip(r1, r2):
        assert np.array_equal(a.soc_after_kwh, b.soc_after_kwh)
        assert np.array_equal(a.charge_kwh, b.charge_kwh)
        assert a.final_soc_kwh == b.final_soc_kwh


def test_simulate_matrix_skips_invalid_users():
    bad = UserTimeline(
        "bad",
        np.array([100, 50], dtype=np.int64),
        np.array([200, 150], dtype=np.int64),
        np.zeros(2), np.zeros(2), np.zeros(2),
    )
    good = UserTimeline.from_trips(
        [trip("good", "2024-03-01T08:00:00", "2024-03-01T09:00:00", u=5)]
    )
    results, diags = simulate_matrix([bad, good], builtin_vehicles()[:1], [scenario(2)])
    assert len(results) == 1 and results[0].user_id == "good"
    assert len(diags) == 1 and diags[0].user_id == "bad"


# ---------------------------------------------------------------------------
# Random-timeline properties

_ts0 = to_epoch_s(datetime(2024, 3, 1))


@st.composite
def valid_timelines(draw):
    """Clean, sorted, non-overlapping per-user timelines."""
    n = draw(st.integers(1, 30))
    t = _ts0 + draw(st.integers(0, 86400))
    rows = []
    for _ in range(n):
        dur = draw(st.integers(60, 4 * 3600))
        km = [draw(st.floats(0, 120, allow_nan=False)) for _ in range(3)]
        rows.append((t, t + dur, *km))
        t += dur + draw(st.integers(130, 2 * 86400))
    return UserTimeline(
        "u",
        np.array([r[0] for r in rows], dtype=np.int64),
        np.array([r[1] for r in rows], dtype=np.int64),
        np.array([r[2] for r in rows], dtype=np.float64),
        np.array([r[3] for r in rows], dtype=np.float64),
        np.array([r[4] for r in rows], dtype=np.float64),
    )


_scenarios = [scenario(i) for i in (1, 2, 3, 4)] + [GREEDY, NEVER]


@given(tl=valid_timelines(), policy_idx=st.integers(0, 5), vehicle_idx=st.integers(0, 3))
@settings(max_examples=150, deadline=None)
def test_property_conservation_and_bounds(tl, policy_idx, vehicle_idx):
    spec = builtin_vehicles()[vehicle_idx]
    result = simulate_timeline(tl, spec, _scenarios[policy_idx])
    assert result.conservation_residual_kwh() < 1e-6
    for arr in (result.soc_before_kwh, result.soc_after_kwh):
        assert np.all(arr >= 0.0) and np.all(arr <= spec.usable_kwh + 1e-12)
    assert np.all(result.charge_kwh > 0.0)


@given(tl=valid_timelines(), policy_idx=st.integers(0, 3), vehicle_idx=st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_property_engine_matches_decision_functions(tl, policy_idx, vehicle_idx):
    """Folding the public charge_decision/charge_delivered over the timeline
    reproduces the kernel's charge ledger and SoC trace exactly."""
    from bevsim.charging import charge_decision, charge_delivered
    from bevsim.energy import trip_energy
    from bevsim.ingest import derive_parkings, to_epoch_s

    spec = builtin_vehicles()[vehicle_idx]
    policy = _scenarios[policy_idx]
    result = simulate_timeline(tl, spec, policy)

    trips = tl.trips()
    parkings = derive_parkings(trips)
    soc = spec.usable_kwh
    events = []
    soc_after = []
    for i, t in enumerate(trips):
        e = trip_energy(spec, t)
        if e <= soc + 1e-9:
            soc = max(0.0, soc - e)
        else:
            soc = 0.0
        soc_after.append(soc)
        if i < len(parkings):
            decision = charge_decision(policy, parkings[i], soc / spec.usable_kwh)
            if decision is not None:
                energy, _end_ts = charge_delivered(policy, decision, soc, spec.usable_kwh)
                # full-charge sessions snap to capacity, as the kernel does
                soc = spec.usable_kwh if energy == spec.usable_kwh - soc else soc + energy
                if energy > 1e-9:
                    events.append((to_epoch_s(decision.begin_ts), energy))

    assert soc_after == [float(x) for x in result.soc_after_kwh]
    assert len(events) == result.n_charges
    for (begin, energy), kb, kk in zip(events, result.charge_begin_s, result.charge_kwh):
        assert begin == kb
        assert energy == kk
    assert soc == result.final_soc_kwh


@given(tl=valid_timelines(), vehicle_idx=st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_property_greedy_charging_feasibility(tl, vehicle_idx):
    """Unbounded power, trigger 1.0, tiny min duration: every trip that fits
    the battery at all is feasible."""
    spec = builtin_vehicles()[vehicle_idx]
    result = simulate_timeline(tl, spec, GREEDY)
    energies = result.energy_kwh
    for i, outcome in enumerate(result.feasible):
        if energies[i] <= spec.usable_kwh + 1e-9:
            assert outcome == 1


@given(tl=valid_timelines(), vehicle_idx=st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_property_never_charging_prefix(tl, vehicle_idx):
    """Without charging, feasible trips are exactly the maximal prefix whose
    cumulative energy fits the initial SoC, plus later near-zero trips (the
    engine's 1e-9 kWh comparison tolerance applies from an empty battery)."""
    spec = builtin_vehicles()[vehicle_idx]
    result = simulate_timeline(tl, spec, NEVER)
    assert result.n_charges == 0
    cumulative = np.cumsum(result.energy_kwh)
    in_prefix = cumulative <= spec.usable_kwh + 1e-9
    if np.all(in_prefix):
        prefix_len = len(cumulative)
    else:
        prefix_len = int(np.argmin(in_prefix))
    for i in range(result.n_trips):
        expected = i < prefix_len or result.energy_kwh[i] <= 1e-9
        assert bool(result.feasible[i]) == expected, (i, prefix_len)
