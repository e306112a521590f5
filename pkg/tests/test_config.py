"""Run-config loading and the vehicle/policy registry schema."""

from __future__ import annotations

import json

import pytest

from bevsim.config import (
    ConfigError,
    load_run_config,
    parse_policy_entry,
    parse_vehicle_entry,
    policy_to_dict,
    vehicle_to_dict,
)


class TestVehicleEntries:
    def test_builtin_by_name(self):
        assert parse_vehicle_entry("Tesla Model 3").usable_kwh == 57.5

    def test_custom_object(self):
        spec = parse_vehicle_entry(
            {
                "name": "Kangoo E-Tech",
                "usable_capacity_kwh": 31.0,
                "rate_urban_wh_km": 120,
                "rate_highway_wh_km": 190,
                "rate_combined_wh_km": 150,
            }
        )
        assert spec.usable_kwh == 31.0
        assert spec.wh_per_km_combined == 150.0
        assert spec.range_km == 0.0  # optional field

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            parse_vehicle_entry("Solar Roadster")

    def test_missing_field(self):
        with pytest.raises(ConfigError):
            parse_vehicle_entry({"name": "x", "usable_capacity_kwh": 10})

    def test_round_trip(self):
        spec = parse_vehicle_entry("Fiat 500e")
        assert parse_vehicle_entry(vehicle_to_dict(spec)) == spec


class TestPolicyEntries:
    def test_scenario_number(self):
        assert parse_policy_entry(3).name == "scenario3"
        assert parse_policy_entry("4").power_kw == 50.0

    def test_custom_windowed(self):
        policy = parse_policy_entry(
            {
                "name": "lunch",
                "power_kw": 11.0,
                "soc_trigger": 0.9,
                "min_duration_minutes": 30,
                "window": {"days": ["mon", "fri"], "start": "12:00", "end": "14:00"},
            }
        )
        assert policy.min_duration_s == 1800
        assert policy.window.days == frozenset({0, 4})

    def test_any_window(self):
        policy = parse_policy_entry(
            {"name": "always", "power_kw": 3.7, "soc_trigger": 1.0,
             "min_duration_minutes": 60, "window": "any"}
        )
        assert policy.window is None

    def test_bad_scenario(self):
        with pytest.raises(ConfigError):
            parse_policy_entry(9)

    def test_round_trip(self):
        for n in (1, 2, 3, 4):
            policy = parse_policy_entry(n)
            assert parse_policy_entry(policy_to_dict(policy)) == policy


class TestRunConfig:
    def test_defaults(self):
        cfg = load_run_config(None)
        assert len(cfg.vehicles) == 4 and len(cfg.policies) == 4
        cfg.validate()

    def test_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"vehicles": ["Fiat 500e"], "policies": [2], "jobs": 3}))
        cfg = load_run_config(path)
        assert [v.name for v in cfg.vehicles] == ["Fiat 500e"]
        assert cfg.jobs == 3

    def test_unknown_field(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"velocities": []}))
        with pytest.raises(ConfigError):
            load_run_config(path)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_run_config(path)

    def test_duplicate_names_rejected(self):
        cfg = load_run_config(None)
        cfg.policies = [parse_policy_entry(1), parse_policy_entry(1)]
        with pytest.raises(ConfigError):
            cfg.validate()
