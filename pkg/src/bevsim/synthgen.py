"""Deterministic synthetic trip-log generator.

Each user draws from an independent Philox 4x64 counter-based stream keyed by
(seed, user index), so generation is reproducible across platforms and
parallelizable per user. Only raw uniform doubles are consumed from the
stream; every other distribution is derived in this module by inverse
transforms, so the byte output depends on nothing but the Philox algorithm.

Profiles are not calibrated to any real dataset; presets are tuned to broad
marginal facts (median ~40 km per active day, about half of users under five
trips per day) and to the guarantees their names imply.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from datetime import datetime
from typing import IO, Iterator

import numpy as np

from .ingest import CSV_HEADER, format_row, iso_ts, to_epoch_s

# Typical cruising speeds per road category, km/h; trip duration follows from
# the per-category split so generated speeds always sit well inside the
# cleaning bounds.
URBAN_KMH = 27.0
EXTRAURBAN_KMH = 65.0
HIGHWAY_KMH = 105.0

MIN_TRIP_S = 90
MAX_TRIP_S = 41000  # stays below the 12 h cleaning bound with margin


class ProfileError(ValueError):
    """The generator profile cannot produce a valid trip log."""


@dataclass(frozen=True)
class ViolationCounts:
    """How many rows of each dirty class to inject, dataset-wide."""

    malformed: int = 0
    overlapping: int = 0
    short_parking_merges: int = 0
    too_short: int = 0
    too_long: int = 0
    too_near: int = 0
    too_far: int = 0
    too_slow: int = 0
    too_fast: int = 0

    def total(self) -> int:
        return sum(asdict(self).values())


@dataclass(frozen=True)
class GeneratorProfile:
    seed: int = 0
    n_users: int = 100
    horizon_days: int = 365
    start_date: str = "2023-10-01"
    active_day_prob: float = 0.82
    trips_per_day_range: tuple[float, float] = (1.8, 6.5)
    max_trips_per_day: int = 9
    trip_km_median_range: tuple[float, float] = (3.0, 13.0)
    trip_km_sigma: float = 0.6
    trip_km_max: float = 70.0
    urban_share_range: tuple[float, float] = (0.35, 0.75)
    highway_share_range: tuple[float, float] = (0.0, 0.30)
    depart_hour_range: tuple[float, float] = (6.0, 9.0)
    return_hour_range: tuple[float, float] = (16.0, 21.0)
    gap_minutes_range: tuple[float, float] = (4.0, 220.0)
    min_gap_s: int = 150
    long_trip_prob: float = 0.02
    long_trip_km_range: tuple[float, float] = (110.0, 260.0)
    long_day_extra_trips: int = 0
    force_long_first_day: bool = False
    daily_km_cap: float | None = None
    inject: ViolationCounts | None = None

    def validate(self) -> None:
        if self.seed < 0:
            raise ProfileError("seed must be a non-negative 64-bit integer")
        if self.seed >= 2**64:
            raise ProfileError("seed must fit in 64 bits")
        if self.n_users < 0:
            raise ProfileError("n_users must be >= 0")
        if self.horizon_days < 1:
            raise ProfileError("horizon_days must be >= 1")
        if not (0.0 <= self.active_day_prob <= 1.0):
            raise ProfileError("active_day_prob must be in [0, 1]")
        if self.max_trips_per_day < 1:
            raise ProfileError("max_trips_per_day must be >= 1")
        for name in (
            "trips_per_day_range",
            "trip_km_median_range",
            "depart_hour_range",
            "return_hour_range",
            "gap_minutes_range",
            "long_trip_km_range",
        ):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ProfileError(f"{name} is inverted: {lo} > {hi}")
        if self.trip_km_median_range[0] <= 0:
            raise ProfileError("trip distances must be positive")
        if self.trip_km_max > 780.0:
            raise ProfileError("trip_km_max above 780 km would breach the distance filter")
        if not (0.0 <= self.long_trip_prob <= 1.0):
            raise ProfileError("long_trip_prob must be in [0, 1]")
        if self.long_trip_km_range[1] > 780.0:
            raise ProfileError("long trips above 780 km would breach the distance filter")
        if self.return_hour_range[1] + 0.7 > 23.4:
            raise ProfileError("return hours that late cannot fit a trip before midnight")
        if self.depart_hour_range[0] - 0.4 < 0.0:
            raise ProfileError("departures that early cross midnight")
        if self.return_hour_range[0] < self.depart_hour_range[1] + 1.0:
            raise ProfileError(
                "day too short: trips cannot fit between departure "
                f"{self.depart_hour_range} and return {self.return_hour_range}"
            )
        if self.min_gap_s <= 120:
            raise ProfileError("min_gap_s at or below the 2 min merge threshold would merge trips")

    def start_epoch_s(self) -> int:
        try:
            day = datetime.fromisoformat(self.start_date)
        except ValueError as exc:
            raise ProfileError(f"bad start_date {self.start_date!r}") from exc
        return to_epoch_s(day)


# ---------------------------------------------------------------------------
# Sampling primitives (inverse transforms over Philox uniforms)


def _user_rng(seed: int, user_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed << 64) + user_index))


def _norm_ppf(p: float) -> float:
    """Acklam's rational approximation to the standard normal quantile."""
    a = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
         1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
    b = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
         6.680131188771972e01, -1.328068155288572e01)
    c = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
         -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
    d = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
         3.754408661907416e00)
    p = min(max(p, 1e-12), 1.0 - 1e-12)
    if p < 0.02425:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if p > 1.0 - 0.02425:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    q = p - 0.5
    r = q * q
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
        ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
    )


def _uniform(rng, lo: float, hi: float) -> float:
    return lo + (hi - lo) * rng.random()


def _normal(rng, mu: float = 0.0, sigma: float = 1.0) -> float:
    return mu + sigma * _norm_ppf(rng.random())


def _lognormal(rng, median: float, sigma: float) -> float:
    return median * math.exp(sigma * _norm_ppf(rng.random()))


def _clip(x, lo, hi):
    return lo if x < lo else hi if x > hi else x


# ---------------------------------------------------------------------------
# Per-user trip synthesis

Row = tuple[int, int, float, float, float]  # start_s, end_s, km per category


def _trip_duration_s(km_u: float, km_e: float, km_h: float, pace_factor: float) -> int:
    hours = (km_u / URBAN_KMH + km_e / EXTRAURBAN_KMH + km_h / HIGHWAY_KMH) * pace_factor
    return int(_clip(round(hours * 3600.0), MIN_TRIP_S, MAX_TRIP_S))


def _split_distance(rng, total_km: float, u_share: float, h_share: float, long_leg: bool):
    if long_leg:
        su, sh = 0.05, 0.80
    else:
        su = _clip(u_share + 0.10 * _normal(rng), 0.03, 0.92)
        sh = _clip(h_share + 0.07 * _normal(rng), 0.0, min(0.85, h_share + 0.15))
        if su + sh > 0.98:
            su = 0.98 - sh
    se = 1.0 - su - sh
    return total_km * su, total_km * se, total_km * sh


def _user_base_rows(profile: GeneratorProfile, user_index: int) -> list[Row]:
    rng = _user_rng(profile.seed, user_index)
    day0 = profile.start_epoch_s()

    mean_trips = _uniform(rng, *profile.trips_per_day_range)
    km_median = _uniform(rng, *profile.trip_km_median_range)
    u_share = _uniform(rng, *profile.urban_share_range)
    h_share = _uniform(rng, *profile.highway_share_range)
    dep_mu = _uniform(rng, *profile.depart_hour_range)
    ret_mu = _uniform(rng, *profile.return_hour_range)

    rows: list[Row] = []
    forced_long_pending = profile.force_long_first_day
    for day in range(profile.horizon_days):
        if rng.random() >= profile.active_day_prob:
            continue
        long_day = rng.random() < profile.long_trip_prob
        if forced_long_pending:
            long_day = True
            forced_long_pending = False

        n = int(_clip(round(mean_trips + 1.1 * _normal(rng)), 1, profile.max_trips_per_day))
        distances = [
            _clip(_lognormal(rng, km_median, profile.trip_km_sigma), 0.3, profile.trip_km_max)
            for _ in range(n)
        ]
        long_flags = [False] * n
        if long_day:
            distances[0] = _uniform(rng, *profile.long_trip_km_range)
            long_flags[0] = True
            for _ in range(profile.long_day_extra_trips):
                distances.append(_uniform(rng, *profile.long_trip_km_range))
                long_flags.append(True)
        if profile.daily_km_cap is not None:
            while len(distances) > 1 and sum(distances) > profile.daily_km_cap:
                distances.pop()
                long_flags.pop()

        day_start = day0 + day * 86400
        t = day_start + int(round(_uniform(rng, dep_mu - 0.4, dep_mu + 0.4) * 3600.0))
        day_end = day_start + int(round(min(ret_mu + _uniform(rng, -0.3, 0.7), 23.3) * 3600.0))
        for dist, long_leg in zip(distances, long_flags):
            km_u, km_e, km_h = _split_distance(rng, dist, u_share, h_share, long_leg)
            dur = _trip_duration_s(km_u, km_e, km_h, _uniform(rng, 0.92, 1.15))
            end = t + dur
            if end > day_end:
                break
            rows.append((t, end, km_u, km_e, km_h))
            gap = max(profile.min_gap_s, int(round(_uniform(rng, *profile.gap_minutes_range) * 60.0)))
            t = end + gap
    return rows


# ---------------------------------------------------------------------------
# Violation injection (dirty-data preset)

# Trailing rows violating exactly one filter rule each:
# (duration_s, km_urban, km_extraurban, km_highway)
_VIOLATION_ROWS = {
    "too_short": (30, 0.5, 0.3, 0.1),  # 108 km/h, legal distance
    "too_long": (46800, 30.0, 40.0, 30.0),  # 13 h at 7.7 km/h
    "too_near": (3600, 0.001, 0.001, 0.001),  # 3 m (also slow; counted as near)
    "too_far": (30600, 100.0, 200.0, 550.0),  # 850 km at 100 km/h
    "too_slow": (3600, 0.2, 0.2, 0.1),  # 0.5 km/h
    "too_fast": (3600, 10.0, 30.0, 100.0),  # 140 km/h
}
_VIOLATION_ORDER = ("too_short", "too_long", "too_near", "too_far", "too_slow", "too_fast")


def _share(total: int, n_users: int, user_index: int) -> int:
    if n_users == 0:
        return 0
    return total // n_users + (1 if user_index < total % n_users else 0)


def _inject_user_rows(
    profile: GeneratorProfile, user_index: int, user_id: str, base: list[Row]
) -> list[str]:
    """Format one user's rows, weaving in this user's share of violations.

    Every injection is reversible by the cleaning pipeline: split pairs merge
    back to the original trip bit-exactly, overlap rows are dropped, trailing
    rows violate exactly one filter rule, malformed rows never parse. The
    cleaned output therefore equals the base rows.
    """
    inj = profile.inject
    assert inj is not None
    if not base:
        raise ProfileError(
            f"user {user_id} has no base trips to anchor injections; "
            "raise active_day_prob or horizon_days"
        )
    n_users = profile.n_users

    rows: list[tuple[int, Row | None, str | None]] = []  # (sort key, row, raw line)

    # Short-parking merges: split an existing trip into two pieces 60 s apart.
    n_splits = _share(inj.short_parking_merges, n_users, user_index)
    eligible = [i for i, r in enumerate(base) if r[1] - r[0] >= 300]
    if len(eligible) < n_splits:
        raise ProfileError(f"user {user_id}: only {len(eligible)} trips can host a split")
    split_at = set(eligible[:n_splits])
    for i, (s, e, ku, ke, kh) in enumerate(base):
        if i in split_at:
            mid = s + (e - s) // 2
            rows.append((s, (s, mid, ku * 0.5, ke * 0.5, kh * 0.5), None))
            rows.append((mid + 60, (mid + 60, e, ku - ku * 0.5, ke - ke * 0.5, kh - kh * 0.5), None))
        else:
            rows.append((s, (s, e, ku, ke, kh), None))

    # Overlapping trips: start inside an existing trip; dropped by validation.
    for j in range(_share(inj.overlapping, n_users, user_index)):
        s, _e, *_ = base[(j * 7 + 3) % len(base)]
        rows.append((s + 30, (s + 30, s + 75, 0.2, 0.1, 0.0), None))

    # Filter violations: appended after the last trip, an hour apart.
    t = base[-1][1] + 3600
    for rule in _VIOLATION_ORDER:
        for _ in range(_share(getattr(inj, rule), n_users, user_index)):
            dur, ku, ke, kh = _VIOLATION_ROWS[rule]
            rows.append((t, (t, t + dur, ku, ke, kh), None))
            t += dur + 3600

    # Malformed rows: appended last, cycling through breakage kinds.
    for j in range(_share(inj.malformed, n_users, user_index)):
        kind = j % 3
        if kind == 0:
            raw = f"{user_id},2024-13-45T99:99:99,{iso_ts(t)},1.0,1.0,1.0\n"
        elif kind == 1:
            raw = f"{user_id},{iso_ts(t)},{iso_ts(t + 600)},-5.0,1.0,1.0\n"
        else:
            raw = f"{user_id},{iso_ts(t)},{iso_ts(t + 600)}\n"
        rows.append((t, None, raw))
        t += 4000

    rows.sort(key=lambda item: item[0])
    out = []
    for _key, row, raw in rows:
        if raw is not None:
            out.append(raw)
        else:
            s, e, ku, ke, kh = row
            out.append(format_row(user_id, s, e, ku, ke, kh))
    return out


# ---------------------------------------------------------------------------
# Public surface


def user_id_for(index: int) -> str:
    return f"u{index:06d}"


def iter_lines(profile: GeneratorProfile) -> Iterator[str]:
    """All CSV lines (header included) for a profile, in user-index order."""
    profile.validate()
    yield ",".join(CSV_HEADER) + "\n"
    for u in range(profile.n_users):
        uid = user_id_for(u)
        base = _user_base_rows(profile, u)
        if profile.inject is not None:
            yield from _inject_user_rows(profile, u, uid, base)
        else:
            for s, e, ku, ke, kh in base:
                yield format_row(uid, s, e, ku, ke, kh)


def generate(profile: GeneratorProfile) -> bytes:
    """The complete trip-log byte stream for a profile (deterministic)."""
    return "".join(iter_lines(profile)).encode("utf-8")


def write_csv(profile: GeneratorProfile, out: IO[str]) -> int:
    """Stream the generated log to a text sink; returns data rows written."""
    n = -1  # header does not count
    for n, line in enumerate(iter_lines(profile)):
        out.write(line)
    return n


def preset_profiles() -> dict[str, GeneratorProfile]:
    """Named profiles with documented guarantees.

    commuter:    short urban days, home every evening; a 21.3 kWh car with
                 nightly window charging completes every trip.
    long-hauler: heavy highway days, each user gets at least one leg that
                 exceeds the smallest battery outright; occasional days beyond
                 any built-in vehicle's range.
    mixed-fleet: wide spread of habits, the default tuning.
    dirty-data:  commuter base plus known counts of every violation class.
    """
    commuter = GeneratorProfile(
        seed=7,
        n_users=150,
        horizon_days=180,
        start_date="2024-01-01",
        active_day_prob=0.88,
        trips_per_day_range=(2.0, 5.0),
        max_trips_per_day=7,
        trip_km_median_range=(3.0, 8.5),
        trip_km_sigma=0.45,
        trip_km_max=16.0,
        urban_share_range=(0.45, 0.75),
        highway_share_range=(0.0, 0.10),
        depart_hour_range=(6.6, 8.8),
        return_hour_range=(16.0, 19.4),
        gap_minutes_range=(5.0, 170.0),
        long_trip_prob=0.0,
        daily_km_cap=90.0,
    )
    long_hauler = GeneratorProfile(
        seed=11,
        n_users=150,
        horizon_days=120,
        start_date="2024-02-05",
        active_day_prob=0.93,
        trips_per_day_range=(3.0, 4.4),
        max_trips_per_day=6,
        trip_km_median_range=(55.0, 95.0),
        trip_km_sigma=0.35,
        trip_km_max=170.0,
        urban_share_range=(0.05, 0.15),
        highway_share_range=(0.55, 0.80),
        depart_hour_range=(6.4, 7.6),
        return_hour_range=(17.3, 19.2),
        gap_minutes_range=(60.0, 250.0),
        long_trip_prob=0.14,
        long_trip_km_range=(140.0, 175.0),
        long_day_extra_trips=2,
        force_long_first_day=True,
    )
    mixed = GeneratorProfile(seed=3, n_users=300)
    dirty = replace(
        commuter,
        seed=13,
        n_users=40,
        horizon_days=40,
        start_date="2024-03-04",
        active_day_prob=1.0,
        inject=ViolationCounts(
            malformed=30,
            overlapping=40,
            short_parking_merges=60,
            too_short=100,
            too_long=25,
            too_near=35,
            too_far=30,
            too_slow=45,
            too_fast=55,
        ),
    )
    return {
        "commuter": commuter,
        "long-hauler": long_hauler,
        "mixed-fleet": mixed,
        "dirty-data": dirty,
    }


def profile_to_dict(profile: GeneratorProfile) -> dict:
    d = asdict(profile)
    if profile.inject is None:
        d.pop("inject")
    return d


def profile_from_dict(data: dict) -> GeneratorProfile:
    data = dict(data)
    inject = data.pop("inject", None)
    known = {f for f in GeneratorProfile.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ProfileError(f"unknown profile fields: {sorted(unknown)}")
    for name, value in list(data.items()):
        if isinstance(value, list):
            data[name] = tuple(value)
    profile = GeneratorProfile(**data)
    if inject is not None:
        profile = replace(profile, inject=ViolationCounts(**inject))
    profile.validate()
    return profile
