"""Long-format CSV ingestion and the wide-to-long converter.

Input tables are long format: one row per (timestamp, series, value), with the
series identified by technology and region columns. Column names are remapped
through a ColumnMap. Rows for one series must lie on a uniform time grid;
missing grid points are forward-filled up to a configurable limit and every
fill is recorded, longer gaps are rejected.

Timestamps are ISO 8601; naive ones are taken as UTC.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from ._fs import atomic_write, open_destination
from .errors import IngestError, ParameterError
from .series import AvailabilitySeries, ResidualLoadSeries, TimeSeries

ROLES = ("availability", "load", "residual_load")


@dataclass(frozen=True)
class ColumnMap:
    """Maps the logical long-format columns to the file's header names."""

    timestamp: str = "timestamp"
    value: str = "value"
    technology: str = "technology"
    region: str = "region"

    @classmethod
    def from_mapping(cls, mapping) -> "ColumnMap":
        if mapping is None:
            return cls()
        if isinstance(mapping, ColumnMap):
            return mapping
        known = {f.name for f in fields(cls)}
        extra = set(mapping) - known
        if extra:
            raise ParameterError(f"unknown column mapping keys: {sorted(extra)}")
        return cls(**{k: str(v) for k, v in mapping.items()})


@dataclass(frozen=True)
class FillRecord:
    """One forward-filled gap: where it was and how many samples were made up."""

    series_id: str
    gap_start: datetime
    filled: int


@dataclass(frozen=True)
class IngestResult:
    """Validated series keyed by id, plus the gap-fill log."""

    series: dict
    fills: tuple[FillRecord, ...] = ()
    role: str = "availability"

    def __getitem__(self, key):
        return self.series[key]

    def __len__(self) -> int:
        return len(self.series)

    def only(self):
        """The single series in the result; errors if there are several."""
        if len(self.series) != 1:
            raise ParameterError(
                f"expected exactly one series, file holds {sorted(self.series)}"
            )
        return next(iter(self.series.values()))


def _parse_timestamp(text: str, line_num: int) -> datetime:
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        t = datetime.fromisoformat(raw)
    except ValueError:
        raise IngestError(f"line {line_num}: cannot parse timestamp {text!r}") from None
    if t.tzinfo is None:
        t = t.replace(tzinfo=timezone.utc)
    return t.astimezone(timezone.utc)


def _parse_value(text: str, line_num: int) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise IngestError(f"line {line_num}: cannot parse value {text!r}") from None
    if not np.isfinite(v):
        raise IngestError(f"line {line_num}: non-finite value {text!r}")
    return v


def ingest_csv(
    path,
    columns=None,
    *,
    role: str = "availability",
    step: timedelta = timedelta(hours=1),
    max_fill_gap: int = 0,
) -> IngestResult:
    """Read a long-format CSV into validated series objects.

    role selects the series type: "availability" requires technology and
    region columns and values in [0, 1]; "load" and "residual_load" are
    unconstrained power series, grouped by region when that column exists.
    Gaps of up to max_fill_gap consecutive missing samples are forward-filled
    and logged; anything longer, and any duplicate or off-grid timestamp, is
    an error naming the offending line.
    """
    if role not in ROLES:
        raise ParameterError(f"role must be one of {ROLES}, got {role!r}")
    cmap = ColumnMap.from_mapping(columns)
    if int(max_fill_gap) != max_fill_gap or max_fill_gap < 0:
        raise ParameterError(f"max_fill_gap must be a non-negative integer, got {max_fill_gap}")
    max_fill_gap = int(max_fill_gap)

    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as err:
        raise IngestError(f"cannot read {path}: {err}") from None
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        needed = [cmap.timestamp, cmap.value]
        if role == "availability":
            needed += [cmap.technology, cmap.region]
        missing = [c for c in needed if c not in header]
        if missing:
            raise IngestError(f"{path}: missing required columns {missing}; header is {header}")
        has_tech = cmap.technology in header
        has_region = cmap.region in header

        # rows per series id: list of (timestamp, value, line_num)
        groups: dict[str, list[tuple[datetime, float, int]]] = {}
        keys: dict[str, tuple[str, str]] = {}
        for row in reader:
            line = reader.line_num
            t = _parse_timestamp(row[cmap.timestamp], line)
            v = _parse_value(row[cmap.value], line)
            if role == "availability":
                tech = (row[cmap.technology] or "").strip()
                region = (row[cmap.region] or "").strip()
                if not tech or not region:
                    raise IngestError(f"line {line}: empty technology or region field")
                sid = f"{tech}@{region}"
                keys[sid] = (tech, region)
                if not 0.0 <= v <= 1.0:
                    raise IngestError(
                        f"line {line}: availability value {v!r} outside [0, 1] for {sid}"
                    )
            else:
                region = (row[cmap.region] or "").strip() if has_region else ""
                tech = (row[cmap.technology] or "").strip() if has_tech else ""
                sid = "@".join(p for p in (tech or role, region) if p)
            groups.setdefault(sid, []).append((t, v, line))

    if not groups:
        raise IngestError(f"{path}: no data rows")

    series: dict[str, object] = {}
    fills: list[FillRecord] = []
    for sid in sorted(groups):
        rows = sorted(groups[sid], key=lambda r: r[0])
        start = rows[0][0]
        values: list[float] = []
        expected = start
        for t, v, line in rows:
            if t < expected:
                raise IngestError(f"line {line}: duplicate timestamp {t.isoformat()} for {sid}")
            if (t - expected) % step != timedelta(0):
                raise IngestError(
                    f"line {line}: timestamp {t.isoformat()} for {sid} is off the "
                    f"{step} grid anchored at {start.isoformat()}"
                )
            gap = (t - expected) // step
            if gap > 0:
                if gap > max_fill_gap:
                    raise IngestError(
                        f"line {line}: gap of {gap} missing samples before "
                        f"{t.isoformat()} for {sid} exceeds max_fill_gap={max_fill_gap}"
                    )
                values.extend([values[-1]] * gap)
                fills.append(FillRecord(series_id=sid, gap_start=expected, filled=int(gap)))
            values.append(v)
            expected = t + step
        ts = TimeSeries(start_time=start, values=values, step=step)
        if role == "availability":
            tech, region = keys[sid]
            series[sid] = AvailabilitySeries(series=ts, technology=tech, region=region)
        elif role == "residual_load":
            series[sid] = ResidualLoadSeries(series=ts, label=sid)
        else:
            series[sid] = ts
    return IngestResult(series=series, fills=tuple(fills), role=role)


def write_long_csv(destination, series_map, columns=None) -> None:
    """Write series back out in the long format ingest_csv reads.

    series_map maps id -> series object; availability ids of the form
    tech@region split back into the two columns, anything else lands in the
    technology column with an empty region.
    """
    cmap = ColumnMap.from_mapping(columns)
    with open_destination(destination, newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow((cmap.timestamp, cmap.region, cmap.technology, cmap.value))
        for sid in sorted(series_map):
            obj = series_map[sid]
            if isinstance(obj, AvailabilitySeries):
                tech, region = obj.technology, obj.region
                ts = obj.series
            else:
                tech, region = sid, ""
                ts = obj.series if isinstance(obj, ResidualLoadSeries) else obj
            t = ts.start_time
            for v in ts.values.tolist():
                writer.writerow((t.isoformat(), region, tech, repr(v)))
                t += ts.step


def wide_to_long(source, destination, *, timestamp_column: str = "timestamp") -> int:
    """Convert a wide CSV (one column per series) to the long input format.

    Wide headers of the form tech@region split into the technology and region
    columns; headers without an @ go into technology with an empty region.
    Empty cells are skipped, leaving a gap for the ingest gap policy to judge.
    Returns the number of data rows written.
    """
    src = Path(source)
    try:
        handle = src.open(newline="", encoding="utf-8")
    except OSError as err:
        raise IngestError(f"cannot read {src}: {err}") from None
    written = 0
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{src}: empty file") from None
        if timestamp_column not in header:
            raise IngestError(f"{src}: no column named {timestamp_column!r} in header {header}")
        t_idx = header.index(timestamp_column)
        series_cols = [(i, name) for i, name in enumerate(header) if i != t_idx]
        if not series_cols:
            raise IngestError(f"{src}: no series columns besides the timestamp")
        with atomic_write(destination, newline="") as out:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(("timestamp", "region", "technology", "value"))
            for line_num, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise IngestError(
                        f"{src} line {line_num}: {len(row)} fields, header has {len(header)}"
                    )
                stamp = row[t_idx]
                for i, name in series_cols:
                    cell = row[i].strip()
                    if not cell:
                        continue
                    tech, _, region = name.partition("@")
                    writer.writerow((stamp, region, tech, cell))
                    written += 1
    return written
