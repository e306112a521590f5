"""Run configuration: vehicle and policy registries, JSON config files.

The schema is normative, the syntax is plain JSON. Vehicles and policies can
be given by name/number (built-ins) or as inline objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .charging import ChargingPolicy, WeeklyWindow, scenario
from .energy import VehicleSpec, builtin_vehicles, vehicle_by_name


class ConfigError(ValueError):
    """Unusable run configuration; maps to exit code 2."""


def parse_vehicle_entry(entry: Any) -> VehicleSpec:
    if isinstance(entry, str):
        try:
            return vehicle_by_name(entry)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    if isinstance(entry, dict):
        try:
            return VehicleSpec(
                name=entry["name"],
                usable_kwh=float(entry["usable_capacity_kwh"]),
                wh_per_km_urban=float(entry["rate_urban_wh_km"]),
                wh_per_km_highway=float(entry["rate_highway_wh_km"]),
                wh_per_km_combined=float(entry["rate_combined_wh_km"]),
                range_km=float(entry.get("estimated_range_km", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad vehicle entry {entry!r}: {exc}") from exc
    raise ConfigError(f"vehicle entry must be a name or an object, got {entry!r}")


def parse_policy_entry(entry: Any) -> ChargingPolicy:
    if isinstance(entry, int) or (isinstance(entry, str) and entry.isdigit()):
        try:
            return scenario(int(entry))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if isinstance(entry, dict):
        try:
            window_spec = entry.get("window", "any")
            if window_spec == "any":
                window = None
            else:
                window = WeeklyWindow.from_times(
                    window_spec["days"], window_spec["start"], window_spec["end"]
                )
            return ChargingPolicy(
                name=entry["name"],
                power_kw=float(entry["power_kw"]),
                soc_trigger=float(entry["soc_trigger"]),
                min_duration_s=int(round(float(entry["min_duration_minutes"]) * 60)),
                window=window,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad policy entry {entry!r}: {exc}") from exc
    raise ConfigError(f"policy entry must be a scenario number or an object, got {entry!r}")


def vehicle_to_dict(spec: VehicleSpec) -> dict:
    return {
        "name": spec.name,
        "usable_capacity_kwh": spec.usable_kwh,
        "rate_urban_wh_km": spec.wh_per_km_urban,
        "rate_highway_wh_km": spec.wh_per_km_highway,
        "rate_combined_wh_km": spec.wh_per_km_combined,
        "estimated_range_km": spec.range_km,
    }


def policy_to_dict(policy: ChargingPolicy) -> dict:
    if policy.window is None:
        window = "any"
    else:
        window = {
            "days": sorted(policy.window.days),
            "start": _s_to_hhmm(policy.window.start_s),
            "end": _s_to_hhmm(policy.window.end_s),
        }
    return {
        "name": policy.name,
        "power_kw": policy.power_kw,
        "soc_trigger": policy.soc_trigger,
        "min_duration_minutes": policy.min_duration_s / 60.0,
        "window": window,
    }


def _s_to_hhmm(s: int) -> str:
    return f"{s // 3600:02d}:{(s % 3600) // 60:02d}"


@dataclass
class RunConfig:
    vehicles: list[VehicleSpec] = field(default_factory=lambda: list(builtin_vehicles()))
    policies: list[ChargingPolicy] = field(default_factory=lambda: [scenario(i) for i in (1, 2, 3, 4)])
    initial_soc_fraction: float = 1.0
    observation_days: float | None = None  # None: use the data span
    histogram_bins: int = 20
    trace: bool = False
    jobs: int | None = None  # None: one worker per CPU

    def validate(self) -> None:
        if not self.vehicles:
            raise ConfigError("at least one vehicle is required")
        if not self.policies:
            raise ConfigError("at least one policy is required")
        if len({v.name for v in self.vehicles}) != len(self.vehicles):
            raise ConfigError("vehicle names must be unique")
        if len({p.name for p in self.policies}) != len(self.policies):
            raise ConfigError("policy names must be unique")
        if not (0.0 <= self.initial_soc_fraction <= 1.0):
            raise ConfigError("initial_soc_fraction must be in [0, 1]")
        if self.observation_days is not None and self.observation_days <= 0:
            raise ConfigError("observation_days must be positive")
        if self.histogram_bins < 1:
            raise ConfigError("histogram_bins must be >= 1")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def snapshot(self) -> dict:
        return {
            "vehicles": [vehicle_to_dict(v) for v in self.vehicles],
            "policies": [policy_to_dict(p) for p in self.policies],
            "initial_soc_fraction": self.initial_soc_fraction,
            "observation_days": self.observation_days,
            "histogram_bins": self.histogram_bins,
            "trace": self.trace,
            "jobs": self.jobs,
        }


def load_run_config(path: str | Path | None) -> RunConfig:
    """RunConfig from a JSON file; missing path gives the defaults."""
    cfg = RunConfig()
    if path is None:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    known = {
        "vehicles", "policies", "initial_soc_fraction", "observation_days",
        "histogram_bins", "trace", "jobs",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "vehicles" in data:
        cfg.vehicles = [parse_vehicle_entry(e) for e in data["vehicles"]]
    if "policies" in data:
        cfg.policies = [parse_policy_entry(e) for e in data["policies"]]
    if "initial_soc_fraction" in data:
        cfg.initial_soc_fraction = float(data["initial_soc_fraction"])
    if "observation_days" in data and data["observation_days"] is not None:
        cfg.observation_days = float(data["observation_days"])
    if "histogram_bins" in data:
        cfg.histogram_bins = int(data["histogram_bins"])
    if "trace" in data:
        cfg.trace = bool(data["trace"])
    if "jobs" in data and data["jobs"] is not None:
        cfg.jobs = int(data["jobs"])
    return cfg
