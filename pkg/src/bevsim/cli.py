"""Command-line surface: synth -> clean -> characterize -> simulate.

Every command is deterministic given (config, input bytes): data outputs are
byte-identical across reruns; only the manifest's wall-clock field varies.
Exit codes: 0 success, 1 empty/degenerate result, 2 usage/config error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_run_config, parse_policy_entry, parse_vehicle_entry
from .ingest import (
    CleaningReport,
    Diagnostic,
    ParsedColumns,
    TripLogError,
    UserTimeline,
    clean_users,
    group_users,
    iso_ts,
    merge_parsed_chunks,
    parse_csv_range,
    parse_trip_log_columns,
    split_line_ranges,
    write_trip_csv,
)
from .metrics import (
    DistributionSummary,
    UserMetrics,
    aggregate,
    characterize_timeline,
    matrix_from_rows,
    user_metrics,
)
from .sim.engine import ENGINE, simulate_timeline
from .synthgen import ProfileError, preset_profiles, profile_from_dict, profile_to_dict, write_csv

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_CONFIG = 2
EXIT_IO = 3

METRIC_NAMES = ("feasible_trip_pct", "monthly_charges", "avg_soc_after_trip_pct")
CHARACTERIZATION_NAMES = ("avg_daily_trips", "avg_daily_distance_km", "utilization_pct")


def _err(msg: str) -> None:
    print(f"bevsim: {msg}", file=sys.stderr)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _slug(text: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in text)


def _resolve_out_dir(arg_value: str | None) -> Path:
    env = os.environ.get("BEVSIM_OUTPUT_DIR")
    if env:
        return Path(env)
    if arg_value is None:
        raise ConfigError("--output is required (or set BEVSIM_OUTPUT_DIR)")
    return Path(arg_value)


def _write_manifest(
    path: Path,
    command: str,
    config_snapshot: dict,
    input_path: Path | None,
    input_rows: int | None,
    stages: dict,
    out_dir: Path,
    output_names: list[str],
    wall_clock_s: float,
) -> None:
    manifest = {
        "tool": "bevsim",
        "version": __version__,
        "engine": ENGINE,
        "command": command,
        "config": config_snapshot,
        "input": None
        if input_path is None
        else {"path": str(input_path), "sha256": _sha256(input_path), "rows": input_rows},
        "stages": stages,
        "outputs": {name: _sha256(out_dir / name) for name in sorted(output_names)},
        "wall_clock_s": wall_clock_s,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _write_distribution_csv(path: Path, summary: DistributionSummary) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("bin_left,bin_right,mass,cdf\n")
        cdf = 0.0
        for i in range(len(summary.mass)):
            cdf += float(summary.mass[i])
            f.write(
                f"{summary.bin_edges[i]:.8f},{summary.bin_edges[i + 1]:.8f},"
                f"{summary.mass[i]:.8f},{cdf:.8f}\n"
            )


_SUMMARY_HEADER = "count,mean,std,min,q1,median,q3,max"


def _summary_fields(s: DistributionSummary) -> str:
    return (
        f"{s.count},{s.mean:.6f},{s.std:.6f},{s.minimum:.6f},"
        f"{s.q1:.6f},{s.median:.6f},{s.q3:.6f},{s.maximum:.6f}"
    )


# ---------------------------------------------------------------------------
# Parallel ingest/clean plumbing (workers must be module-level picklable)


@contextmanager
def _pool_if(jobs: int):
    if jobs <= 1:
        yield None
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield pool


def _parse_range_worker(args) -> ParsedColumns:
    return parse_csv_range(*args)


def _clean_chunk_worker(timelines) -> tuple[list[UserTimeline], CleaningReport, list[Diagnostic]]:
    return clean_users(timelines)


def _load_columns(in_path: Path, jobs: int, pool) -> ParsedColumns:
    """Parse a trip log, splitting it across workers when a pool is given."""
    if pool is None or jobs <= 1:
        return parse_trip_log_columns(in_path)
    ranges = split_line_ranges(in_path, jobs * 2)
    if len(ranges) <= 1:
        return parse_trip_log_columns(in_path)
    chunks = list(pool.map(_parse_range_worker, [(str(in_path), a, b) for a, b in ranges]))
    return merge_parsed_chunks(chunks)


def _clean_all(
    timelines: list[UserTimeline], jobs: int, pool
) -> tuple[list[UserTimeline], CleaningReport, list[Diagnostic]]:
    if pool is None or jobs <= 1 or len(timelines) < 64:
        return clean_users(timelines)
    chunk_size = max(1, (len(timelines) + jobs * 4 - 1) // (jobs * 4))
    chunks = [timelines[i : i + chunk_size] for i in range(0, len(timelines), chunk_size)]
    cleaned: list[UserTimeline] = []
    report = CleaningReport()
    diags: list[Diagnostic] = []
    for part, part_report, part_diags in pool.map(_clean_chunk_worker, chunks):
        cleaned.extend(part)
        report = report + part_report
        diags.extend(part_diags)
    return cleaned, report, diags


# ---------------------------------------------------------------------------
# synth


def _cmd_synth(args) -> int:
    t0 = time.perf_counter()
    try:
        if args.profile:
            try:
                with open(args.profile, "r", encoding="utf-8") as f:
                    profile = profile_from_dict(json.load(f))
            except OSError as exc:
                _err(f"cannot read profile: {exc}")
                return EXIT_CONFIG
            except (json.JSONDecodeError, TypeError) as exc:
                _err(f"bad profile file: {exc}")
                return EXIT_CONFIG
        else:
            presets = preset_profiles()
            if args.preset not in presets:
                _err(f"unknown profile {args.preset!r}; presets: {sorted(presets)}")
                return EXIT_CONFIG
            profile = presets[args.preset]
        if args.seed is not None:
            profile = dataclasses.replace(profile, seed=args.seed)
        if args.users is not None:
            profile = dataclasses.replace(profile, n_users=args.users)
        if args.days is not None:
            profile = dataclasses.replace(profile, horizon_days=args.days)
        profile.validate()
    except ProfileError as exc:
        _err(str(exc))
        return EXIT_CONFIG

    env_dir = os.environ.get("BEVSIM_OUTPUT_DIR")
    out_path = Path(args.output)
    if env_dir:
        out_path = Path(env_dir) / out_path.name
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8", newline="") as f:
            rows = write_csv(profile, f)
    except ProfileError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        _err(f"cannot write output: {exc}")
        return EXIT_IO

    _write_manifest(
        out_path.with_name(out_path.name + ".manifest.json"),
        "synth",
        {"profile": profile_to_dict(profile)},
        None,
        None,
        {"rows_written": rows, "users": profile.n_users},
        out_path.parent,
        [out_path.name],
        time.perf_counter() - t0,
    )
    print(f"wrote {rows} rows for {profile.n_users} users to {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# clean


def _write_diagnostics(path: Path, diags: list[Diagnostic]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("reason,line_no,user_id,detail\n")
        for d in diags:
            detail = d.detail.replace('"', "'").replace("\n", " ")
            f.write(f"\"{d.reason}\",{d.line_no if d.line_no is not None else ''},"
                    f"{d.user_id or ''},\"{detail}\"\n")


def _cmd_clean(args) -> int:
    t0 = time.perf_counter()
    in_path = Path(args.input)
    if not in_path.is_file():
        _err(f"input file not found: {in_path}")
        return EXIT_CONFIG
    try:
        out_dir = _resolve_out_dir(args.output)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    try:
        with _pool_if(jobs) as pool:
            cols = _load_columns(in_path, jobs, pool)
            users = group_users(cols)
            cleaned, report, diags = _clean_all(users, jobs, pool)
    except TripLogError as exc:
        _err(str(exc))
        return EXIT_IO
    except OSError as exc:
        _err(f"cannot read input: {exc}")
        return EXIT_IO

    report.input_rows = cols.input_rows  # include malformed rows in the ledger
    report.malformed = len(cols.diagnostics)
    all_diags = cols.diagnostics + diags

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "cleaned.csv", "w", encoding="utf-8", newline="") as f:
            rows_out = write_trip_csv(cleaned, f)
        with open(out_dir / "cleaning_report.json", "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        _write_diagnostics(out_dir / "diagnostics.csv", all_diags)
    except OSError as exc:
        _err(f"cannot write outputs: {exc}")
        return EXIT_IO

    _write_manifest(
        out_dir / "manifest.json",
        "clean",
        {"input": str(in_path)},
        in_path,
        cols.input_rows,
        {
            "input_rows": cols.input_rows,
            "malformed": report.malformed,
            "users_in": len(users),
            "users_out": len(cleaned),
            "trips_out": rows_out,
        },
        out_dir,
        ["cleaned.csv", "cleaning_report.json", "diagnostics.csv"],
        time.perf_counter() - t0,
    )
    print(
        f"cleaned {cols.input_rows} rows -> {rows_out} trips over {len(cleaned)} users "
        f"(merges {report.short_parking_merges}, rejected {report.rejected}, "
        f"malformed {report.malformed}, overlapping {report.overlapping})"
    )
    return EXIT_OK if rows_out else EXIT_EMPTY


# ---------------------------------------------------------------------------
# characterize


def _cmd_characterize(args) -> int:
    t0 = time.perf_counter()
    in_path = Path(args.input)
    if not in_path.is_file():
        _err(f"input file not found: {in_path}")
        return EXIT_CONFIG
    try:
        out_dir = _resolve_out_dir(args.output)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    try:
        cols = parse_trip_log_columns(in_path)
    except TripLogError as exc:
        _err(str(exc))
        return EXIT_IO

    users = [tl for tl in group_users(cols) if tl.n_trips]
    if not users:
        _err("no users in input")
        return EXIT_EMPTY

    rows = [(tl.user_id, characterize_timeline(tl)) for tl in users]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "user_characterization.csv", "w", encoding="utf-8", newline="") as f:
            f.write("user_id,avg_daily_trips,avg_daily_distance_km,utilization_pct\n")
            for uid, c in rows:
                f.write(
                    f"{uid},{c.avg_daily_trips:.6f},{c.avg_daily_distance_km:.6f},"
                    f"{c.utilization_pct:.6f}\n"
                )
        outputs = ["user_characterization.csv", "characterization_summary.csv"]
        with open(out_dir / "characterization_summary.csv", "w", encoding="utf-8", newline="") as f:
            f.write("metric," + _SUMMARY_HEADER + "\n")
            for name in CHARACTERIZATION_NAMES:
                values = [getattr(c, name) for _uid, c in rows]
                summary = aggregate(values, bins=args.bins)
                f.write(f"{name},{_summary_fields(summary)}\n")
                dist_name = f"dist_{name}.csv"
                _write_distribution_csv(out_dir / dist_name, summary)
                outputs.append(dist_name)
    except OSError as exc:
        _err(f"cannot write outputs: {exc}")
        return EXIT_IO

    _write_manifest(
        out_dir / "manifest.json",
        "characterize",
        {"input": str(in_path), "histogram_bins": args.bins},
        in_path,
        cols.input_rows,
        {"users": len(users), "trips": int(sum(tl.n_trips for tl in users))},
        out_dir,
        outputs,
        time.perf_counter() - t0,
    )
    print(f"characterized {len(users)} users")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def _metric_rows_for_users(
    timelines: list[UserTimeline],
    cfg_vehicles,
    cfg_policies,
    observation_days: float,
    initial_soc_fraction: float,
) -> tuple[list[tuple], list[Diagnostic]]:
    """Simulate every combination for a batch of users, reduced to metric rows.

    Row: (user_id, vehicle, policy, feasible_pct, monthly, avg_soc_pct, suitable).
    """
    rows: list[tuple] = []
    diags: list[Diagnostic] = []
    for tl in timelines:
        if not tl.is_valid_timeline() or tl.n_trips == 0:
            diags.append(Diagnostic(reason="invalid timeline, user skipped", user_id=tl.user_id))
            continue
        for spec in cfg_vehicles:
            for policy in cfg_policies:
                result = simulate_timeline(tl, spec, policy, initial_soc_fraction)
                m = user_metrics(result, observation_days)
                rows.append(
                    (
                        tl.user_id,
                        spec.name,
                        policy.name,
                        m.feasible_trip_pct,
                        m.monthly_charges,
                        m.avg_soc_after_trip_pct,
                        m.suitable,
                    )
                )
    return rows, diags


def _simulate_chunk(payload) -> tuple[list[tuple], list[Diagnostic]]:
    timelines, vehicles, policies, observation_days, initial_frac = payload
    return _metric_rows_for_users(timelines, vehicles, policies, observation_days, initial_frac)


def _run_fanout(
    timelines: list[UserTimeline],
    cfg: RunConfig,
    observation_days: float,
    jobs: int,
    pool,
) -> tuple[list[tuple], list[Diagnostic]]:
    if pool is None or jobs <= 1 or len(timelines) < 2:
        return _metric_rows_for_users(
            timelines, cfg.vehicles, cfg.policies, observation_days, cfg.initial_soc_fraction
        )
    chunk_size = max(1, (len(timelines) + jobs * 4 - 1) // (jobs * 4))
    chunks = [
        (
            timelines[i : i + chunk_size],
            cfg.vehicles,
            cfg.policies,
            observation_days,
            cfg.initial_soc_fraction,
        )
        for i in range(0, len(timelines), chunk_size)
    ]
    rows: list[tuple] = []
    diags: list[Diagnostic] = []
    for chunk_rows, chunk_diags in pool.map(_simulate_chunk, chunks):
        rows.extend(chunk_rows)
        diags.extend(chunk_diags)
    return rows, diags


def _write_trace_files(out_dir: Path, timelines, cfg: RunConfig) -> list[str]:
    """Per-trip SoC trace, one file per vehicle x policy combination."""
    names = []
    for spec in cfg.vehicles:
        for policy in cfg.policies:
            name = f"trace__{_slug(policy.name)}__{_slug(spec.name)}.csv"
            names.append(name)
            with open(out_dir / name, "w", encoding="utf-8", newline="") as f:
                f.write("user_id,trip_index,start_ts,energy_kwh,soc_before_kwh,soc_after_kwh,feasible\n")
                for tl in timelines:
                    if not tl.is_valid_timeline() or tl.n_trips == 0:
                        continue
                    r = simulate_timeline(tl, spec, policy, cfg.initial_soc_fraction)
                    for i in range(r.n_trips):
                        f.write(
                            f"{tl.user_id},{i},{iso_ts(int(tl.start_s[i]))},"
                            f"{r.energy_kwh[i]:.9f},{r.soc_before_kwh[i]:.9f},"
                            f"{r.soc_after_kwh[i]:.9f},{'true' if r.feasible[i] else 'false'}\n"
                        )
    return names


def _cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    # Fail fast on configuration before touching the (possibly large) input.
    try:
        cfg = load_run_config(args.config)
        if args.vehicles:
            cfg.vehicles = [parse_vehicle_entry(v.strip()) for v in args.vehicles.split(",")]
        if args.scenarios:
            cfg.policies = [parse_policy_entry(s.strip()) for s in args.scenarios.split(",")]
        if args.initial_soc is not None:
            cfg.initial_soc_fraction = args.initial_soc
        if args.observation_days is not None:
            cfg.observation_days = args.observation_days
        if args.bins is not None:
            cfg.histogram_bins = args.bins
        if args.trace:
            cfg.trace = True
        if args.jobs is not None:
            cfg.jobs = args.jobs
        cfg.validate()
        out_dir = _resolve_out_dir(args.output)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG

    in_path = Path(args.input)
    if not in_path.is_file():
        _err(f"input file not found: {in_path}")
        return EXIT_CONFIG

    jobs = cfg.jobs if cfg.jobs is not None else (os.cpu_count() or 1)
    if cfg.trace:
        jobs = 1  # trace files are written by a single pass
    try:
        with _pool_if(jobs) as pool:
            cols = _load_columns(in_path, jobs, pool)
            timelines = [tl for tl in group_users(cols) if tl.n_trips]
            if not timelines:
                _err("no users in input")
                return EXIT_EMPTY
            if cfg.observation_days is not None:
                observation_days = cfg.observation_days
            else:
                first = min(int(tl.start_s[0]) for tl in timelines)
                last = max(int(tl.end_s[-1]) for tl in timelines)
                observation_days = max((last - first) / 86400.0, 1.0 / 86400.0)
            rows, sim_diags = _run_fanout(timelines, cfg, observation_days, jobs, pool)
    except TripLogError as exc:
        _err(str(exc))
        return EXIT_IO
    all_diags = cols.diagnostics + sim_diags

    if not rows:
        _err("no simulable users in input")
        return EXIT_EMPTY

    policy_names = [p.name for p in cfg.policies]
    vehicle_names = [v.name for v in cfg.vehicles]
    metric_rows = [
        (uid, pol, veh, UserMetrics(f, mc, soc, suit))
        for (uid, veh, pol, f, mc, soc, suit) in rows
    ]
    cells = matrix_from_rows(metric_rows, policy_names, vehicle_names)

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = ["user_metrics.csv", "matrix.csv", "distributions_summary.csv", "diagnostics.csv"]
        with open(out_dir / "user_metrics.csv", "w", encoding="utf-8", newline="") as f:
            f.write("user_id,vehicle,policy,feasible_trip_pct,monthly_charges,avg_soc_after_trip_pct,suitable\n")
            for uid, veh, pol, feas, mc, soc, suit in rows:
                f.write(
                    f"{uid},{veh},{pol},{feas:.6f},{mc:.6f},{soc:.6f},"
                    f"{'true' if suit else 'false'}\n"
                )
        with open(out_dir / "matrix.csv", "w", encoding="utf-8", newline="") as f:
            f.write("policy,vehicle,mean_feasible_trip_pct,mean_avg_soc_after_trip_pct,suitable_user_share,n_users\n")
            for c in cells:
                f.write(
                    f"{c.policy},{c.vehicle},{c.mean_feasible_trip_pct:.6f},"
                    f"{c.mean_avg_soc_after_trip_pct:.6f},{c.suitable_user_share:.6f},{c.n_users}\n"
                )
        by_cell: dict[tuple[str, str], list[tuple]] = {}
        for uid, veh, pol, feas, mc, soc, suit in rows:
            by_cell.setdefault((pol, veh), []).append((feas, mc, soc))
        with open(out_dir / "distributions_summary.csv", "w", encoding="utf-8", newline="") as f:
            f.write("metric,policy,vehicle," + _SUMMARY_HEADER + "\n")
            for m_idx, metric in enumerate(METRIC_NAMES):
                for pol in policy_names:
                    for veh in vehicle_names:
                        values = [t[m_idx] for t in by_cell[(pol, veh)]]
                        summary = aggregate(values, bins=cfg.histogram_bins)
                        f.write(f"{metric},{pol},{veh},{_summary_fields(summary)}\n")
                        dist_name = f"dist_{metric}__{_slug(pol)}__{_slug(veh)}.csv"
                        _write_distribution_csv(out_dir / dist_name, summary)
                        outputs.append(dist_name)
        _write_diagnostics(out_dir / "diagnostics.csv", all_diags)
        if cfg.trace:
            outputs.extend(_write_trace_files(out_dir, timelines, cfg))
    except OSError as exc:
        _err(f"cannot write outputs: {exc}")
        return EXIT_IO

    _write_manifest(
        out_dir / "manifest.json",
        "simulate",
        {"input": str(in_path), **cfg.snapshot(), "observation_days_used": observation_days},
        in_path,
        cols.input_rows,
        {
            "users": len(timelines),
            "trips": int(sum(tl.n_trips for tl in timelines)),
            "combinations": len(cfg.vehicles) * len(cfg.policies),
            "metric_rows": len(rows),
            "skipped_users": len(sim_diags),
            "jobs": jobs,
        },
        out_dir,
        outputs,
        time.perf_counter() - t0,
    )
    print(
        f"simulated {len(timelines)} users x {len(cfg.vehicles)} vehicles x "
        f"{len(cfg.policies)} policies with engine={ENGINE}, jobs={jobs}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bevsim",
        description="Replay combustion-car trip logs against BEV models and charging policies.",
    )
    parser.add_argument("--version", action="version", version=f"bevsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic trip log")
    p_synth.add_argument("--preset", default="mixed-fleet", help="named profile")
    p_synth.add_argument("--profile", help="JSON profile file (overrides --preset)")
    p_synth.add_argument("--seed", type=int, help="override profile seed")
    p_synth.add_argument("--users", type=int, help="override number of users")
    p_synth.add_argument("--days", type=int, help="override horizon days")
    p_synth.add_argument("--output", required=True, help="output CSV path")
    p_synth.set_defaults(func=_cmd_synth)

    p_clean = sub.add_parser("clean", help="apply the cleaning pipeline to a trip log")
    p_clean.add_argument("--input", required=True)
    p_clean.add_argument("--output", help="output directory")
    p_clean.add_argument("--jobs", type=int, help="parallel workers (default: CPU count)")
    p_clean.set_defaults(func=_cmd_clean)

    p_char = sub.add_parser("characterize", help="per-user usage statistics of a cleaned log")
    p_char.add_argument("--input", required=True)
    p_char.add_argument("--output", help="output directory")
    p_char.add_argument("--bins", type=int, default=20)
    p_char.set_defaults(func=_cmd_characterize)

    p_sim = sub.add_parser("simulate", help="replay a cleaned log against vehicles and policies")
    p_sim.add_argument("--input", required=True, help="cleaned trip CSV")
    p_sim.add_argument("--output", help="output directory")
    p_sim.add_argument("--config", help="run-config JSON file")
    p_sim.add_argument("--vehicles", help="comma-separated built-in vehicle names")
    p_sim.add_argument("--scenarios", help="comma-separated scenario numbers")
    p_sim.add_argument("--initial-soc", type=float, dest="initial_soc", help="initial SoC fraction")
    p_sim.add_argument("--observation-days", type=float, dest="observation_days")
    p_sim.add_argument("--bins", type=int, help="histogram bin count")
    p_sim.add_argument("--trace", action="store_true", help="dump per-trip SoC traces")
    p_sim.add_argument("--jobs", type=int, help="parallel workers (default: CPU count)")
    p_sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the contract
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ProfileError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        _err(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
