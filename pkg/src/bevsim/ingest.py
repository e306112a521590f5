"""Trip-log ingestion: CSV parsing, cleaning rules, and parking derivation.

The cleaning pipeline for one user runs in a fixed order: sort and drop
overlapping trips, merge trips separated by very short parkings, then apply
the duration/distance/speed filters. Parking events are derived afterwards
as the gaps between consecutive retained trips.
"""

from __future__ import annotations

import csv
import io
import math
import os
from array import array
from dataclasses import dataclass, fields
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

CSV_HEADER = ("user_id", "start_ts", "end_ts", "km_urban", "km_extraurban", "km_highway")

# Cleaning rule constants. Filter bounds are inclusive: a trip lasting exactly
# one minute or driving at exactly 130 km/h is retained.
MERGE_GAP_S = 120
MIN_DURATION_S = 60
MAX_DURATION_S = 12 * 3600
MIN_DISTANCE_KM = 0.005
MAX_DISTANCE_KM = 800.0
MIN_SPEED_KMH = 5.0
MAX_SPEED_KMH = 130.0

_EPOCH = datetime(1970, 1, 1)
_EPOCH_ORDINAL = _EPOCH.toordinal()


def to_epoch_s(ts: datetime) -> int:
    """Civil timestamp -> whole seconds since 1970-01-01T00:00:00, no zone."""
    return (ts.toordinal() - _EPOCH_ORDINAL) * 86400 + ts.hour * 3600 + ts.minute * 60 + ts.second


def from_epoch_s(s: Union[int, float]) -> datetime:
    return _EPOCH + timedelta(seconds=s)


_day_str_cache: dict[int, str] = {}


def _day_str(day: int) -> str:
    s = _day_str_cache.get(day)
    if s is None:
        s = date.fromordinal(day + _EPOCH_ORDINAL).isoformat()
        _day_str_cache[day] = s
    return s


def iso_ts(epoch_s: int) -> str:
    day, rem = divmod(int(epoch_s), 86400)
    h, rem = divmod(rem, 3600)
    m, s = divmod(rem, 60)
    return f"{_day_str(day)}T{h:02d}:{m:02d}:{s:02d}"


@dataclass(frozen=True, slots=True)
class TripRecord:
    """One ignition-on to ignition-off drive with per-road-category distances."""

    user_id: str
    start_ts: datetime
    end_ts: datetime
    km_urban: float
    km_extraurban: float
    km_highway: float

    def __post_init__(self) -> None:
        if self.end_ts <= self.start_ts:
            raise ValueError(f"trip must end after it starts: {self.start_ts} .. {self.end_ts}")
        if min(self.km_urban, self.km_extraurban, self.km_highway) < 0:
            raise ValueError("distances must be non-negative")

    @property
    def total_km(self) -> float:
        return self.km_urban + self.km_extraurban + self.km_highway

    @property
    def duration_s(self) -> int:
        return to_epoch_s(self.end_ts) - to_epoch_s(self.start_ts)


@dataclass(frozen=True, slots=True)
class ParkingEvent:
    """Gap between the end of one trip and the start of the next, same user."""

    user_id: str
    start_ts: datetime
    end_ts: datetime

    def __post_init__(self) -> None:
        if self.end_ts < self.start_ts:
            raise ValueError("parking cannot end before it starts")

    @property
    def duration_s(self) -> int:
        return to_epoch_s(self.end_ts) - to_epoch_s(self.start_ts)


@dataclass(frozen=True, slots=True)
class Diagnostic:
    """A reported (never silently dropped) ingestion or validation problem."""

    reason: str
    line_no: int | None = None
    user_id: str | None = None
    detail: str = ""


@dataclass
class CleaningReport:
    """Tallies of what the cleaning pipeline did to the input rows.

    Reconciliation invariant: input_rows equals retained plus malformed plus
    overlapping plus short_parking_merges plus the six filter rejections
    (each merge removes exactly one row from the count).
    """

    input_rows: int = 0
    malformed: int = 0
    overlapping: int = 0
    short_parking_merges: int = 0
    too_short: int = 0
    too_long: int = 0
    too_near: int = 0
    too_far: int = 0
    too_slow: int = 0
    too_fast: int = 0
    retained: int = 0

    FILTER_FIELDS = ("too_short", "too_long", "too_near", "too_far", "too_slow", "too_fast")

    @property
    def rejected(self) -> int:
        return sum(getattr(self, f) for f in self.FILTER_FIELDS)

    def reconciles(self) -> bool:
        return self.input_rows == (
            self.retained + self.malformed + self.overlapping + self.short_parking_merges + self.rejected
        )

    def __add__(self, other: "CleaningReport") -> "CleaningReport":
        merged = CleaningReport()
        for f in fields(CleaningReport):
            setattr(merged, f.name, getattr(self, f.name) + getattr(other, f.name))
        return merged

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(CleaningReport)}
        d["rejected"] = self.rejected
        return d


class TripLogError(RuntimeError):
    """Fatal ingestion problem: unreadable stream or wrong header."""


@dataclass
class UserTimeline:
    """Columnar per-user trip sequence (epoch seconds, km per road category).

    The canonical in-memory form: cleaning, characterization and the replay
    engine all operate on these arrays so multi-million-trip runs never
    materialize per-trip objects.
    """

    user_id: str
    start_s: np.ndarray
    end_s: np.ndarray
    km_urban: np.ndarray
    km_extraurban: np.ndarray
    km_highway: np.ndarray

    @property
    def n_trips(self) -> int:
        return len(self.start_s)

    @property
    def total_km(self) -> np.ndarray:
        return self.km_urban + self.km_extraurban + self.km_highway

    def trips(self) -> list[TripRecord]:
        return [
            TripRecord(
                self.user_id,
                from_epoch_s(int(self.start_s[i])),
                from_epoch_s(int(self.end_s[i])),
                float(self.km_urban[i]),
                float(self.km_extraurban[i]),
                float(self.km_highway[i]),
            )
            for i in range(self.n_trips)
        ]

    @classmethod
    def from_trips(cls, trips: Iterable[TripRecord], user_id: str | None = None) -> "UserTimeline":
        trips = list(trips)
        if user_id is None:
            user_id = trips[0].user_id if trips else ""
        return cls(
            user_id=user_id,
            start_s=np.array([to_epoch_s(t.start_ts) for t in trips], dtype=np.int64),
            end_s=np.array([to_epoch_s(t.end_ts) for t in trips], dtype=np.int64),
            km_urban=np.array([t.km_urban for t in trips], dtype=np.float64),
            km_extraurban=np.array([t.km_extraurban for t in trips], dtype=np.float64),
            km_highway=np.array([t.km_highway for t in trips], dtype=np.float64),
        )

    def is_valid_timeline(self) -> bool:
        """Sorted by start and non-overlapping (ingest postcondition)."""
        if self.n_trips == 0:
            return True
        if not np.all(self.end_s > self.start_s):
            return False
        return bool(np.all(self.start_s[1:] >= self.end_s[:-1]))


# ---------------------------------------------------------------------------
# Parsing


def _open_text(stream) -> IO[str]:
    if isinstance(stream, (str, Path)):
        return open(stream, "r", encoding="utf-8", newline="")
    if isinstance(stream, bytes):
        return io.StringIO(stream.decode("utf-8"))
    if hasattr(stream, "read"):
        if isinstance(stream.read(0), bytes):
            return io.TextIOWrapper(stream, encoding="utf-8", newline="")
        return stream
    raise TripLogError(f"cannot read trip log from {type(stream).__name__}")


def _check_header(row: list[str] | None) -> None:
    if row is None:
        raise TripLogError("empty stream: missing header")
    if tuple(h.strip() for h in row) != CSV_HEADER:
        raise TripLogError(f"unexpected header {row!r}; expected {','.join(CSV_HEADER)}")


def _parse_row(row: list[str]) -> tuple[str, int, int, float, float, float] | str:
    """One CSV data row -> field tuple, or a rejection reason string."""
    if len(row) != 6:
        return "wrong field count"
    user = row[0]
    if not user:
        return "empty user_id"
    try:
        start = to_epoch_s(datetime.fromisoformat(row[1]))
        end = to_epoch_s(datetime.fromisoformat(row[2]))
    except ValueError:
        return "bad timestamp"
    try:
        ku, ke, kh = float(row[3]), float(row[4]), float(row[5])
    except ValueError:
        return "bad distance"
    if not (math.isfinite(ku) and math.isfinite(ke) and math.isfinite(kh)):
        return "bad distance"
    if ku < 0 or ke < 0 or kh < 0:
        return "negative distance"
    if end <= start:
        return "end not after start"
    return user, start, end, ku, ke, kh


def parse_trip_log(stream) -> tuple[list[TripRecord], list[Diagnostic]]:
    """Parse a trip-log CSV into records plus malformed-row diagnostics.

    Rows are returned in file order, ungrouped and unsorted. Malformed rows
    (bad timestamp, negative distance, missing field, ...) are skipped but
    always reported with their line number.
    """
    f = _open_text(stream)
    reader = csv.reader(f)
    _check_header(next(reader, None))
    records: list[TripRecord] = []
    diags: list[Diagnostic] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        parsed = _parse_row(row)
        if isinstance(parsed, str):
            diags.append(Diagnostic(reason=parsed, line_no=line_no, detail=",".join(row)[:200]))
            continue
        user, start, end, ku, ke, kh = parsed
        records.append(TripRecord(user, from_epoch_s(start), from_epoch_s(end), ku, ke, kh))
    return records, diags


@dataclass
class ParsedColumns:
    """Row-order columnar parse result, before any grouping or cleaning."""

    user_ids: list[str]  # distinct users, first-appearance order
    user_code: np.ndarray  # int32 index into user_ids, one per row
    start_s: np.ndarray
    end_s: np.ndarray
    km_urban: np.ndarray
    km_extraurban: np.ndarray
    km_highway: np.ndarray
    diagnostics: list[Diagnostic]
    input_rows: int
    n_lines: int = 0  # physical lines covered (range parses; blank lines included)

    @property
    def n_rows(self) -> int:
        return len(self.user_code)


def parse_trip_log_columns(stream) -> ParsedColumns:
    """Columnar twin of parse_trip_log, for multi-million-row files."""
    f = _open_text(stream)
    reader = csv.reader(f)
    _check_header(next(reader, None))

    code_of: dict[str, int] = {}
    user_ids: list[str] = []
    codes = array("i")
    starts = array("q")
    ends = array("q")
    kus = array("d")
    kes = array("d")
    khs = array("d")
    diags: list[Diagnostic] = []
    n_rows = 0
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        n_rows += 1
        parsed = _parse_row(row)
        if isinstance(parsed, str):
            diags.append(Diagnostic(reason=parsed, line_no=line_no, detail=",".join(row)[:200]))
            continue
        user, start, end, ku, ke, kh = parsed
        code = code_of.get(user)
        if code is None:
            code = len(user_ids)
            code_of[user] = code
            user_ids.append(user)
        codes.append(code)
        starts.append(start)
        ends.append(end)
        kus.append(ku)
        kes.append(ke)
        khs.append(kh)

    def _np(a, dtype):
        return np.frombuffer(a, dtype=dtype).copy() if len(a) else np.empty(0, dtype=dtype)

    return ParsedColumns(
        user_ids=user_ids,
        user_code=_np(codes, np.int32),
        start_s=_np(starts, np.int64),
        end_s=_np(ends, np.int64),
        km_urban=_np(kus, np.float64),
        km_extraurban=_np(kes, np.float64),
        km_highway=_np(khs, np.float64),
        diagnostics=diags,
        input_rows=n_rows,
    )


def split_line_ranges(path: str | Path, n_ranges: int) -> list[tuple[int, int]]:
    """Partition a CSV file into byte ranges aligned to line boundaries.

    The first range starts after the header line. Assumes rows contain no
    embedded newlines (true of the canonical writer); the sequential parser
    remains the fallback for anything else.
    """
    size = os.path.getsize(path)
    with open(path, "rb") as f:
        header = f.readline().decode("utf-8").strip()
        _check_header(next(csv.reader([header]), None))
        body_start = f.tell()
        if n_ranges <= 1 or size - body_start < (1 << 20):
            return [(body_start, size)]
        ranges = []
        approx = (size - body_start) // n_ranges
        start = body_start
        for k in range(1, n_ranges):
            f.seek(body_start + k * approx)
            f.readline()
            boundary = min(f.tell(), size)
            if boundary > start:
                ranges.append((start, boundary))
                start = boundary
        if start < size:
            ranges.append((start, size))
        return ranges


def parse_csv_range(path: str | Path, start: int, end: int) -> ParsedColumns:
    """Parse one byte range of a trip log (no header expected inside it).

    Diagnostics carry line numbers local to the range (1-based); the merge
    step rebases them to absolute file positions.
    """
    with open(path, "rb") as f:
        f.seek(start)
        blob = f.read(end - start)
    text = blob.decode("utf-8")
    reader = csv.reader(io.StringIO(text, newline=""))

    code_of: dict[str, int] = {}
    user_ids: list[str] = []
    codes = array("i")
    starts = array("q")
    ends = array("q")
    kus = array("d")
    kes = array("d")
    khs = array("d")
    diags: list[Diagnostic] = []
    n_rows = 0
    n_lines = 0
    for local_no, row in enumerate(reader, start=1):
        n_lines += 1
        if not row:
            continue
        n_rows += 1
        parsed = _parse_row(row)
        if isinstance(parsed, str):
            diags.append(Diagnostic(reason=parsed, line_no=local_no, detail=",".join(row)[:200]))
            continue
        user, s, e, ku, ke, kh = parsed
        code = code_of.get(user)
        if code is None:
            code = len(user_ids)
            code_of[user] = code
            user_ids.append(user)
        codes.append(code)
        starts.append(s)
        ends.append(e)
        kus.append(ku)
        kes.append(ke)
        khs.append(kh)

    def _np(a, dtype):
        return np.frombuffer(a, dtype=dtype).copy() if len(a) else np.empty(0, dtype=dtype)

    return ParsedColumns(
        user_ids=user_ids,
        user_code=_np(codes, np.int32),
        start_s=_np(starts, np.int64),
        end_s=_np(ends, np.int64),
        km_urban=_np(kus, np.float64),
        km_extraurban=_np(kes, np.float64),
        km_highway=_np(khs, np.float64),
        diagnostics=diags,
        input_rows=n_rows,
        n_lines=n_lines,
    )


def merge_parsed_chunks(chunks: list[ParsedColumns]) -> ParsedColumns:
    """Stitch range-parsed chunks back together, in order.

    User codes are remapped to a global first-appearance numbering and
    diagnostic line numbers are rebased past the header.
    """
    if not chunks:
        return ParsedColumns([], np.empty(0, np.int32), np.empty(0, np.int64),
                             np.empty(0, np.int64), np.empty(0), np.empty(0), np.empty(0), [], 0)
    global_code: dict[str, int] = {}
    user_ids: list[str] = []
    remapped = []
    diags: list[Diagnostic] = []
    line_offset = 1  # the header line
    for chunk in chunks:
        translation = np.empty(max(len(chunk.user_ids), 1), dtype=np.int32)
        for i, uid in enumerate(chunk.user_ids):
            code = global_code.get(uid)
            if code is None:
                code = len(user_ids)
                global_code[uid] = code
                user_ids.append(uid)
            translation[i] = code
        remapped.append(translation[chunk.user_code] if len(chunk.user_code) else chunk.user_code)
        for d in chunk.diagnostics:
            diags.append(Diagnostic(d.reason, line_offset + d.line_no, d.user_id, d.detail))
        line_offset += chunk.n_lines
    return ParsedColumns(
        user_ids=user_ids,
        user_code=np.concatenate(remapped) if remapped else np.empty(0, np.int32),
        start_s=np.concatenate([c.start_s for c in chunks]),
        end_s=np.concatenate([c.end_s for c in chunks]),
        km_urban=np.concatenate([c.km_urban for c in chunks]),
        km_extraurban=np.concatenate([c.km_extraurban for c in chunks]),
        km_highway=np.concatenate([c.km_highway for c in chunks]),
        diagnostics=diags,
        input_rows=sum(c.input_rows for c in chunks),
    )


# ---------------------------------------------------------------------------
# Cleaning core (array level)


def _sort_and_drop_overlaps(
    tl: UserTimeline, diags: list[Diagnostic] | None
) -> tuple[UserTimeline, int]:
    """Chronological order; on overlap the later-starting trip is dropped."""
    order = np.lexsort((tl.end_s, tl.start_s))
    if not np.array_equal(order, np.arange(len(order))):
        tl = _take(tl, order)
    if tl.n_trips <= 1 or np.all(tl.start_s[1:] >= tl.end_s[:-1]):
        return tl, 0
    keep = np.ones(tl.n_trips, dtype=bool)
    last_end = tl.end_s[0]
    dropped = 0
    for i in range(1, tl.n_trips):
        if tl.start_s[i] < last_end:
            keep[i] = False
            dropped += 1
            if diags is not None:
                diags.append(
                    Diagnostic(
                        reason="overlapping trip dropped",
                        user_id=tl.user_id,
                        detail=f"{iso_ts(tl.start_s[i])} starts before {iso_ts(last_end)}",
                    )
                )
        else:
            last_end = tl.end_s[i]
    return _take(tl, np.flatnonzero(keep)), dropped


def _take(tl: UserTimeline, idx: np.ndarray) -> UserTimeline:
    return UserTimeline(
        tl.user_id,
        tl.start_s[idx],
        tl.end_s[idx],
        tl.km_urban[idx],
        tl.km_extraurban[idx],
        tl.km_highway[idx],
    )


def _merge_short_gaps(tl: UserTimeline, threshold_s: int = MERGE_GAP_S) -> tuple[UserTimeline, int]:
    """Merge trips whose separating parking is shorter than threshold_s.

    Left-to-right: a chain of short gaps collapses into a single trip spanning
    the first start to the last end, with per-category distances summed.
    """
    if tl.n_trips <= 1:
        return tl, 0
    gaps = tl.start_s[1:] - tl.end_s[:-1]
    long_enough = gaps >= threshold_s
    if np.all(long_enough):
        return tl, 0
    firsts = np.flatnonzero(np.concatenate(([True], long_enough)))
    lasts = np.concatenate((firsts[1:] - 1, [tl.n_trips - 1]))
    merged = UserTimeline(
        tl.user_id,
        tl.start_s[firsts],
        tl.end_s[lasts],
        np.add.reduceat(tl.km_urban, firsts),
        np.add.reduceat(tl.km_extraurban, firsts),
        np.add.reduceat(tl.km_highway, firsts),
    )
    return merged, tl.n_trips - merged.n_trips


# First matching rule wins the tally, in this order. too_near precedes
# too_slow on purpose: a sub-5-meter trip of legal duration is always also
# slower than 5 km/h, and it must be counted as a distance rejection.
_FILTER_RULES = ("too_short", "too_long", "too_near", "too_far", "too_slow", "too_fast")


def _filter_masks(tl: UserTimeline) -> dict[str, np.ndarray]:
    duration = tl.end_s - tl.start_s
    total = tl.total_km
    speed = total * 3600.0 / duration
    return {
        "too_short": duration < MIN_DURATION_S,
        "too_long": duration > MAX_DURATION_S,
        "too_near": total < MIN_DISTANCE_KM,
        "too_far": total > MAX_DISTANCE_KM,
        "too_slow": speed < MIN_SPEED_KMH,
        "too_fast": speed > MAX_SPEED_KMH,
    }


def _apply_filters(tl: UserTimeline, report: CleaningReport) -> UserTimeline:
    if tl.n_trips == 0:
        return tl
    masks = _filter_masks(tl)
    remaining = np.ones(tl.n_trips, dtype=bool)
    for rule in _FILTER_RULES:
        hit = remaining & masks[rule]
        n = int(np.count_nonzero(hit))
        if n:
            setattr(report, rule, getattr(report, rule) + n)
            remaining &= ~hit
    if np.all(remaining):
        return tl
    return _take(tl, np.flatnonzero(remaining))


def clean_timeline(
    tl: UserTimeline,
    report: CleaningReport | None = None,
    diagnostics: list[Diagnostic] | None = None,
) -> tuple[UserTimeline, CleaningReport]:
    """Full cleaning pipeline for one user's raw trips."""
    if report is None:
        report = CleaningReport()
    report.input_rows += tl.n_trips
    tl, overlaps = _sort_and_drop_overlaps(tl, diagnostics)
    report.overlapping += overlaps
    tl, merges = _merge_short_gaps(tl)
    report.short_parking_merges += merges
    tl = _apply_filters(tl, report)
    report.retained += tl.n_trips
    return tl, report


def group_users(cols: ParsedColumns) -> list[UserTimeline]:
    """Partition parsed rows into per-user timelines, first-appearance order.

    Within a user, file order is preserved (cleaning sorts later).
    """
    if cols.n_rows == 0:
        return []
    order = np.argsort(cols.user_code, kind="stable")
    code_sorted = cols.user_code[order]
    firsts = np.flatnonzero(np.concatenate(([True], code_sorted[1:] != code_sorted[:-1])))
    bounds = np.concatenate((firsts, [len(order)]))
    out = []
    for k in range(len(firsts)):
        idx = order[bounds[k] : bounds[k + 1]]
        out.append(
            UserTimeline(
                cols.user_ids[int(code_sorted[firsts[k]])],
                cols.start_s[idx],
                cols.end_s[idx],
                cols.km_urban[idx],
                cols.km_extraurban[idx],
                cols.km_highway[idx],
            )
        )
    return out


def clean_users(
    timelines: Iterable[UserTimeline],
) -> tuple[list[UserTimeline], CleaningReport, list[Diagnostic]]:
    """Clean every user; users left with zero trips are dropped."""
    report = CleaningReport()
    diags: list[Diagnostic] = []
    cleaned = []
    for tl in timelines:
        out, _ = clean_timeline(tl, report, diags)
        if out.n_trips:
            cleaned.append(out)
    return cleaned, report, diags


# ---------------------------------------------------------------------------
# Record-level contract functions (thin wrappers over the array core)


def _require_single_user(trips: list[TripRecord]) -> None:
    users = {t.user_id for t in trips}
    if len(users) > 1:
        raise ValueError(f"expected trips of a single user, got {sorted(users)}")


def sort_and_validate_user(
    trips: Iterable[TripRecord],
) -> tuple[list[TripRecord], list[Diagnostic]]:
    """Chronologically sorted trips; overlapping trips are dropped and reported."""
    trips = list(trips)
    _require_single_user(trips)
    diags: list[Diagnostic] = []
    tl, _ = _sort_and_drop_overlaps(UserTimeline.from_trips(trips), diags)
    return tl.trips(), diags


def merge_short_parkings(
    trips: Iterable[TripRecord], threshold_s: int = MERGE_GAP_S
) -> list[TripRecord]:
    """Collapse trips separated by parkings shorter than threshold_s (strict <)."""
    trips = list(trips)
    _require_single_user(trips)
    merged, _ = _merge_short_gaps(UserTimeline.from_trips(trips), threshold_s)
    return merged.trips()


def filter_trips(trips: Iterable[TripRecord]) -> tuple[list[TripRecord], CleaningReport]:
    """Apply the duration/distance/speed rules; tally one rejection per trip."""
    trips = list(trips)
    _require_single_user(trips)
    report = CleaningReport(input_rows=len(trips))
    kept = _apply_filters(UserTimeline.from_trips(trips), report)
    report.retained = kept.n_trips
    return kept.trips(), report


def derive_parkings(trips: Iterable[TripRecord]) -> list[ParkingEvent]:
    """The n-1 parking events tiling the gaps of n cleaned, sorted trips."""
    trips = list(trips)
    return [
        ParkingEvent(a.user_id, a.end_ts, b.start_ts) for a, b in zip(trips, trips[1:])
    ]


def clean_user_trips(
    trips: Iterable[TripRecord],
) -> tuple[list[TripRecord], list[ParkingEvent], CleaningReport, list[Diagnostic]]:
    """Record-level pipeline: sort/validate, merge, filter, derive parkings."""
    trips = list(trips)
    _require_single_user(trips)
    diags: list[Diagnostic] = []
    tl, report = clean_timeline(UserTimeline.from_trips(trips), diagnostics=diags)
    cleaned = tl.trips()
    return cleaned, derive_parkings(cleaned), report, diags


# ---------------------------------------------------------------------------
# Canonical CSV output


def format_row(user_id: str, start_s: int, end_s: int, ku: float, ke: float, kh: float) -> str:
    """Canonical row formatting; floats use repr so re-parsing is exact."""
    if '"' in user_id or "," in user_id or "\n" in user_id:
        user_id = '"' + user_id.replace('"', '""') + '"'
    return f"{user_id},{iso_ts(start_s)},{iso_ts(end_s)},{ku!r},{ke!r},{kh!r}\n"


def write_trip_csv(timelines: Iterable[UserTimeline], out: IO[str]) -> int:
    """Write timelines in canonical form; returns the number of rows written."""
    out.write(",".join(CSV_HEADER) + "\n")
    n = 0
    for tl in timelines:
        uid = tl.user_id
        if '"' in uid or "," in uid or "\n" in uid:
            uid = '"' + uid.replace('"', '""') + '"'
        lines = [
            f"{uid},{iso_ts(s)},{iso_ts(e)},{ku!r},{ke!r},{kh!r}\n"
            for s, e, ku, ke, kh in zip(
                tl.start_s.tolist(),
                tl.end_s.tolist(),
                tl.km_urban.tolist(),
                tl.km_extraurban.tolist(),
                tl.km_highway.tolist(),
            )
        ]
        out.write("".join(lines))
        n += len(lines)
    return n
