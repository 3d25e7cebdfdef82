"""Event aggregation and machine-readable export.

Three artifacts summarize a detection run: the cumulative frequency-duration
distribution (how many events last at least d samples), yearly extremes
(per-calendar-year event count, maximum duration, maximum deficit), and the
event table itself as CSV or JSON.

Event CSV columns, in order:

    method, threshold_kind, threshold_param, threshold_value, intdur,
    start_time, end_time, duration_steps, energy_deficit, recovery_steps,
    truncated

Times are ISO 8601 UTC, absent optionals are empty strings, and numbers keep
full precision, so export followed by import reproduces the event list
exactly. The file format carries neither the series identity nor its time
base; import_events takes those from the caller.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

from ._fs import open_destination
from .errors import ParameterError
from .events import Method, ShortageEvent
from .series import as_timeseries
from .thresholds import ZERO_LINE, ResolvedThreshold, ThresholdSpec, ZeroLine

EVENT_COLUMNS = (
    "method",
    "threshold_kind",
    "threshold_param",
    "threshold_value",
    "intdur",
    "start_time",
    "end_time",
    "duration_steps",
    "energy_deficit",
    "recovery_steps",
    "truncated",
)


# ---------------------------------------------------------------------------
# Frequency-duration distribution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyDurationDistribution:
    """Cumulative counts: how many events last at least each duration."""

    points: tuple[tuple[int, int], ...]
    method: Method | None = None

    @property
    def total_events(self) -> int:
        return self.points[0][1] if self.points else 0

    def count_at_least(self, duration: int) -> int:
        for d, c in self.points:
            if d >= duration:
                return c
        return 0


def frequency_duration_distribution(events: list[ShortageEvent]) -> FrequencyDurationDistribution:
    """Cumulative frequency-duration distribution of one detection run.

    Events must come from a single (method, threshold) invocation; mixing
    methods or thresholds in one distribution would be meaningless.
    """
    if not events:
        return FrequencyDurationDistribution(points=())
    methods = {e.method for e in events}
    if len(methods) > 1:
        raise ParameterError(
            f"events mix methods {sorted(m.value for m in methods)}; "
            "build one distribution per method"
        )
    thresholds = {e.threshold for e in events}
    if len(thresholds) > 1:
        raise ParameterError("events mix thresholds; build one distribution per threshold")
    durations = sorted(e.duration for e in events)
    n = len(durations)
    points = []
    for i, d in enumerate(durations):
        if i == 0 or durations[i - 1] != d:
            points.append((d, n - i))
    return FrequencyDurationDistribution(points=tuple(points), method=events[0].method)


# ---------------------------------------------------------------------------
# Yearly extremes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Calendar:
    """Time base of an analyzed series: start, step, number of samples."""

    start_time: datetime
    step: timedelta
    length: int

    def time_at(self, index: int) -> datetime:
        return self.start_time + index * self.step

    @property
    def end_time(self) -> datetime:
        return self.time_at(self.length - 1)

    @classmethod
    def of(cls, series_calendar) -> "Calendar":
        if isinstance(series_calendar, Calendar):
            return series_calendar
        ts = as_timeseries(series_calendar)
        return cls(start_time=ts.start_time, step=ts.step, length=len(ts))


@dataclass(frozen=True)
class YearRow:
    year: int
    count: int
    max_duration: int
    max_energy_deficit: float


@dataclass(frozen=True)
class YearlyExtremes:
    rows: tuple[YearRow, ...]

    def row(self, year: int) -> YearRow:
        for r in self.rows:
            if r.year == year:
                return r
        raise KeyError(year)

    @property
    def total_events(self) -> int:
        return sum(r.count for r in self.rows)


def yearly_extremes(events: list[ShortageEvent], series_calendar) -> YearlyExtremes:
    """Per-calendar-year event counts and maxima.

    Every year the series touches gets a row, with zeros where nothing
    happened. Events straddling a year boundary count toward the year they
    start in.
    """
    cal = Calendar.of(series_calendar)
    rows: dict[int, list[ShortageEvent]] = {
        year: [] for year in range(cal.start_time.year, cal.end_time.year + 1)
    }
    for e in events:
        year = cal.time_at(e.start_index).year
        if year not in rows:
            raise ParameterError(
                f"event starting at index {e.start_index} ({year}) falls outside "
                f"the series calendar {cal.start_time.year}..{cal.end_time.year}"
            )
        rows[year].append(e)
    out = []
    for year in sorted(rows):
        year_events = rows[year]
        out.append(
            YearRow(
                year=year,
                count=len(year_events),
                max_duration=max((e.duration for e in year_events), default=0),
                max_energy_deficit=max((e.energy_deficit for e in year_events), default=0.0),
            )
        )
    return YearlyExtremes(rows=tuple(out))


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return repr(float(x))


def _event_record(event: ShortageEvent, cal: Calendar) -> dict:
    th = event.threshold
    if isinstance(th, ZeroLine):
        kind, param, value = "zero", None, 0.0
    else:
        kind, param, value = th.spec.kind, th.spec.param, th.value
    return {
        "method": event.method.value,
        "threshold_kind": kind,
        "threshold_param": param,
        "threshold_value": value,
        "intdur": event.intdur,
        "start_time": cal.time_at(event.start_index).isoformat(),
        "end_time": cal.time_at(event.end_index).isoformat(),
        "duration_steps": event.duration,
        "energy_deficit": event.energy_deficit,
        "recovery_steps": event.recovery,
        "truncated": event.truncated,
    }


def _record_to_row(rec: dict) -> list[str]:
    row = []
    for col in EVENT_COLUMNS:
        v = rec[col]
        if v is None:
            row.append("")
        elif isinstance(v, bool):
            row.append("true" if v else "false")
        elif isinstance(v, float):
            row.append(_fmt_float(v))
        else:
            row.append(str(v))
    return row


def export_events(events: list[ShortageEvent], destination, format: str = "csv", *, series_calendar) -> None:
    """Write events as CSV or JSON; empty input yields a header-only file.

    series_calendar (a series or Calendar) supplies the time base that turns
    event indices into timestamps.
    """
    if format not in ("csv", "json"):
        raise ParameterError(f"format must be 'csv' or 'json', got {format!r}")
    cal = Calendar.of(series_calendar)
    records = [_event_record(e, cal) for e in events]

    def write_to(handle) -> None:
        if format == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(EVENT_COLUMNS)
            for rec in records:
                writer.writerow(_record_to_row(rec))
        else:
            json.dump(records, handle, indent=2)
            handle.write("\n")

    try:
        with open_destination(destination, newline="") as handle:
            write_to(handle)
    except OSError as err:
        raise OSError(f"cannot write events to {destination}: {err}") from err


def import_events(
    source,
    format: str = "csv",
    *,
    start_time: datetime,
    step: timedelta,
    series_id: str = "",
) -> list[ShortageEvent]:
    """Read an exported event table back into ShortageEvent objects.

    start_time/step give the series time base (the file stores timestamps,
    not indices) and series_id restores the provenance label the column set
    does not carry.
    """
    if format not in ("csv", "json"):
        raise ParameterError(f"format must be 'csv' or 'json', got {format!r}")
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    if format == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or tuple(reader.fieldnames) != EVENT_COLUMNS:
            raise ParameterError(
                f"unexpected event CSV header {reader.fieldnames}; expected {list(EVENT_COLUMNS)}"
            )
        raw = [dict(row) for row in reader]
        for rec in raw:
            for key in ("threshold_param", "intdur", "recovery_steps"):
                if rec[key] == "":
                    rec[key] = None
            rec["truncated"] = {"true": True, "false": False}[rec["truncated"]]
    else:
        raw = json.loads(text)

    def to_index(iso: str) -> int:
        t = datetime.fromisoformat(iso)
        steps, rem = divmod(t - start_time, step)
        if rem != timedelta(0):
            raise ParameterError(f"timestamp {iso} is not on the given time grid")
        return int(steps)

    events = []
    for rec in raw:
        kind = rec["threshold_kind"]
        if kind == "zero":
            threshold = ZERO_LINE
        else:
            threshold = ResolvedThreshold(
                value=float(rec["threshold_value"]),
                spec=ThresholdSpec(kind, float(rec["threshold_param"])),
                series_id=series_id,
            )
        start = to_index(rec["start_time"])
        duration = int(rec["duration_steps"])
        events.append(
            ShortageEvent(
                method=Method(rec["method"]),
                start_index=start,
                end_index=start + duration - 1,
                duration=duration,
                energy_deficit=float(rec["energy_deficit"]),
                threshold=threshold,
                intdur=None if rec["intdur"] is None else int(rec["intdur"]),
                recovery=None if rec["recovery_steps"] is None else int(rec["recovery_steps"]),
                truncated=bool(rec["truncated"]),
            )
        )
    return events


# ---------------------------------------------------------------------------
# Aggregate tables (used by the CLI and the batch engine)
# ---------------------------------------------------------------------------

def write_distribution_csv(dist: FrequencyDurationDistribution, destination) -> None:
    with open_destination(destination, newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("duration_steps", "cumulative_count"))
        for d, c in dist.points:
            writer.writerow((d, c))


def write_yearly_csv(extremes: YearlyExtremes, destination) -> None:
    with open_destination(destination, newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("year", "count", "max_duration_steps", "max_energy_deficit"))
        for r in extremes.rows:
            writer.writerow((r.year, r.count, r.max_duration, _fmt_float(r.max_energy_deficit)))
