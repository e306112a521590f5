#!/usr/bin/env python3
"""Benchmark the compiled replay kernel against the pure-Python fallback.

Generates a seeded corpus, replays every user x vehicle x policy combination
through both kernels on identical arrays, verifies the outputs agree bit for
bit, and prints a throughput table.

Usage:
    python benchmarks/bench_engines.py [--users N] [--days D] [--seed S]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bevsim.charging import scenario
from bevsim.energy import builtin_vehicles, trip_energies
from bevsim.ingest import clean_users, group_users, parse_trip_log_columns
from bevsim.sim import _pykernel
from bevsim.sim.engine import policy_kernel_params
from bevsim.synthgen import GeneratorProfile, generate

try:
    from bevsim.sim import _kernel
except ImportError:
    _kernel = None


def build_corpus(users: int, days: int, seed: int):
    profile = GeneratorProfile(seed=seed, n_users=users, horizon_days=days)
    timelines, _, _ = clean_users(group_users(parse_trip_log_columns(generate(profile))))
    return timelines


def run_engine(kernel, timelines, specs, policies) -> tuple[float, list]:
    params = [policy_kernel_params(p) for p in policies]
    outputs = []
    t0 = time.perf_counter()
    for tl in timelines:
        for spec in specs:
            energy = trip_energies(spec, tl.km_urban, tl.km_extraurban, tl.km_highway)
            for policy, (anytime, mask, ws, wl) in zip(policies, params):
                outputs.append(
                    kernel.replay(
                        tl.start_s, tl.end_s, energy,
                        spec.usable_kwh, spec.usable_kwh,
                        policy.power_kw, policy.soc_trigger, policy.min_duration_s,
                        anytime, mask, ws, wl,
                    )
                )
    return time.perf_counter() - t0, outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--users", type=int, default=300)
    parser.add_argument("--days", type=int, default=180)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"building corpus: {args.users} users x {args.days} days (seed {args.seed})")
    timelines = build_corpus(args.users, args.days, args.seed)
    n_trips = sum(tl.n_trips for tl in timelines)
    specs = builtin_vehicles()
    policies = [scenario(i) for i in (1, 2, 3, 4)]
    n_events = n_trips * len(specs) * len(policies)
    print(f"corpus: {len(timelines)} users, {n_trips} trips, "
          f"{n_events / 1e6:.1f}M trip-events per engine pass\n")

    t_py, out_py = run_engine(_pykernel, timelines, specs, policies)
    rows = [("python", t_py, n_events / t_py)]

    if _kernel is not None:
        t_c, out_c = run_engine(_kernel, timelines, specs, policies)
        rows.insert(0, ("compiled", t_c, n_events / t_c))
        mismatches = 0
        for a, b in zip(out_c, out_py):
            for x, y in zip(a, b):
                if isinstance(y, float):
                    mismatches += x != y
                elif not np.array_equal(x, y):
                    mismatches += 1
        status = "bit-identical" if mismatches == 0 else f"{mismatches} MISMATCHES"
        print(f"cross-check: compiled vs python outputs {status}")
        if mismatches:
            return 1
    else:
        print("compiled kernel not built (install with Cython); python only")

    print(f"\n{'engine':<10} {'seconds':>9} {'events/s':>13}")
    for name, seconds, rate in rows:
        print(f"{name:<10} {seconds:>9.2f} {rate / 1e6:>12.1f}M")
    if _kernel is not None:
        print(f"\ncompiled speedup over python: {t_py / t_c:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
