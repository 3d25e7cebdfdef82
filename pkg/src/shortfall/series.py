"""Time-series substrate: construction, validation, moving averages, summary statistics.

All series are uniformly spaced. A series is fully described by its UTC start
time, a fixed step, and a vector of finite float values; index i maps to
start_time + i*step with no gaps. Gap handling happens at ingestion, never here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

import numpy as np

from .errors import ParameterError

# Average Julian year, used to normalize full load hours on multi-year series.
HOURS_PER_YEAR = 8766.0

DEFAULT_STEP = timedelta(hours=1)


def _as_utc(t: datetime) -> datetime:
    """Require a timezone-aware timestamp and normalize it to UTC."""
    if t.tzinfo is None:
        raise ParameterError("start_time must be timezone-aware (UTC)")
    return t.astimezone(timezone.utc)


def _as_value_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ParameterError(f"values must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ParameterError("series must contain at least one value")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ParameterError(f"non-finite value at index {bad}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly spaced scalar series starting at a UTC timestamp."""

    start_time: datetime
    values: np.ndarray
    step: timedelta = DEFAULT_STEP

    def __post_init__(self) -> None:
        object.__setattr__(self, "start_time", _as_utc(self.start_time))
        object.__setattr__(self, "values", _as_value_array(self.values))
        if self.step <= timedelta(0):
            raise ParameterError(f"step must be positive, got {self.step}")

    @classmethod
    def hourly(cls, values, start_time: datetime | None = None) -> "TimeSeries":
        """Convenience constructor for hourly series (synthetic studies mostly)."""
        if start_time is None:
            start_time = datetime(2001, 1, 1, tzinfo=timezone.utc)
        return cls(start_time=start_time, values=values, step=timedelta(hours=1))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def step_hours(self) -> float:
        return self.step.total_seconds() / 3600.0

    @property
    def end_time(self) -> datetime:
        """Timestamp of the last sample."""
        return self.start_time + (len(self) - 1) * self.step

    def time_at(self, index: int) -> datetime:
        if not 0 <= index < len(self):
            raise ParameterError(f"index {index} outside series of length {len(self)}")
        return self.start_time + index * self.step

    def index_at(self, t: datetime) -> int:
        """Inverse of time_at; errors if t does not fall on the sample grid."""
        offset = _as_utc(t) - self.start_time
        steps, remainder = divmod(offset, self.step)
        if remainder != timedelta(0):
            raise ParameterError(f"{t.isoformat()} is not on the series sample grid")
        if not 0 <= steps < len(self):
            raise ParameterError(f"{t.isoformat()} lies outside the series span")
        return int(steps)

    def replace_values(self, values) -> "TimeSeries":
        return TimeSeries(start_time=self.start_time, values=values, step=self.step)


@dataclass(frozen=True, eq=False)
class AvailabilitySeries:
    """Availability (capacity) factors in [0, 1] for one technology in one region."""

    series: TimeSeries
    technology: str
    region: str

    def __post_init__(self) -> None:
        v = self.series.values
        if v.min() < 0.0 or v.max() > 1.0:
            bad = int(np.flatnonzero((v < 0.0) | (v > 1.0))[0])
            raise ParameterError(
                f"availability value {v[bad]!r} at index {bad} outside [0, 1] "
                f"for {self.technology}@{self.region}"
            )

    @property
    def id(self) -> str:
        return f"{self.technology}@{self.region}"

    @property
    def values(self) -> np.ndarray:
        return self.series.values

    @property
    def step_hours(self) -> float:
        return self.series.step_hours

    def __len__(self) -> int:
        return len(self.series)


@dataclass(frozen=True, eq=False)
class ResidualLoadSeries:
    """Residual load in power units; positive = supply gap, negative = surplus."""

    series: TimeSeries
    label: str = "residual_load"

    @property
    def id(self) -> str:
        return self.label

    @property
    def values(self) -> np.ndarray:
        return self.series.values

    @property
    def step_hours(self) -> float:
        return self.series.step_hours

    def __len__(self) -> int:
        return len(self.series)


SeriesLike = "TimeSeries | AvailabilitySeries | ResidualLoadSeries"


def as_timeseries(series) -> TimeSeries:
    """Underlying TimeSeries of any series-like object."""
    if isinstance(series, TimeSeries):
        return series
    if isinstance(series, (AvailabilitySeries, ResidualLoadSeries)):
        return series.series
    raise ParameterError(f"not a series: {type(series).__name__}")


def series_id(series) -> str:
    return series.id if isinstance(series, (AvailabilitySeries, ResidualLoadSeries)) else ""


# ---------------------------------------------------------------------------
# Moving averages
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MovingAverageSeries:
    """Lagging moving average over windows of exactly `intdur` samples.

    The value at source index t is the mean of source values on
    [t - intdur + 1, t]. The first intdur - 1 indices are warm-up and carry no
    value; `values` holds only the defined region, so values[k] belongs to
    source index k + offset.
    """

    source: TimeSeries
    intdur: int
    values: np.ndarray = field(repr=False)

    @property
    def offset(self) -> int:
        return self.intdur - 1

    def __len__(self) -> int:
        return int(self.values.size)

    def value_at(self, source_index: int) -> float:
        k = source_index - self.offset
        if not 0 <= k < len(self):
            raise ParameterError(
                f"moving average undefined at index {source_index} (warm-up or out of range)"
            )
        return float(self.values[k])


def moving_average(series, intdur: int) -> MovingAverageSeries:
    """Moving average of exactly `intdur` samples ending at and including t.

    intdur=1 is the identity: the defined region is the whole series and the
    values are the source values, bit for bit. The warm-up region is never
    zero-padded.
    """
    ts = as_timeseries(series)
    n = len(ts)
    if not isinstance(intdur, (int, np.integer)):
        raise ParameterError(f"intdur must be an integer, got {intdur!r}")
    if intdur < 1:
        raise ParameterError(f"intdur must be >= 1, got {intdur}")
    if intdur > n:
        raise ParameterError(f"intdur {intdur} exceeds series length {n}")
    if intdur == 1:
        vals = ts.values
    else:
        windows = np.lib.stride_tricks.sliding_window_view(ts.values, intdur)
        vals = windows.mean(axis=-1)
        vals.setflags(write=False)
    return MovingAverageSeries(source=ts, intdur=int(intdur), values=vals)


# ---------------------------------------------------------------------------
# Summary statistics
# ---------------------------------------------------------------------------

class SeriesStats:
    """Mean, percentiles, duration curve, and full load hours of one series.

    full_load_hours is the raw sum(values) * step_hours over the whole series;
    full_load_hours_per_year normalizes it by elapsed time in average Julian
    years (8766 h), so multi-year series stay comparable to annual figures.
    """

    def __init__(self, series) -> None:
        ts = as_timeseries(series)
        self._values = ts.values
        self.step_hours = ts.step_hours
        self.mean = float(np.mean(self._values))
        self.full_load_hours = float(np.sum(self._values) * self.step_hours)
        elapsed_years = len(ts) * self.step_hours / HOURS_PER_YEAR
        self.full_load_hours_per_year = self.full_load_hours / elapsed_years

    def percentile(self, p: float) -> float:
        """p-th percentile, linear interpolation between closest ranks."""
        if not 0.0 <= p <= 100.0:
            raise ParameterError(f"percentile must lie in [0, 100], got {p}")
        return float(np.percentile(self._values, p))

    @property
    def duration_curve(self) -> np.ndarray:
        """Values sorted descending (availability/load duration curve)."""
        curve = np.sort(self._values)[::-1].copy()
        curve.setflags(write=False)
        return curve


def summary_stats(series) -> SeriesStats:
    return SeriesStats(series)


def split_by_year(series) -> dict[int, TimeSeries]:
    """Split a series into per-calendar-year sub-series (UTC years).

    Useful for per-year threshold resolution or per-year statistics; the
    library itself always analyzes the full series unbroken.
    """
    ts = as_timeseries(series)
    years: dict[int, list[int]] = {}
    t = ts.start_time
    for i in range(len(ts)):
        years.setdefault(t.year, []).append(i)
        t += ts.step
    out = {}
    for year, idx in years.items():
        out[year] = TimeSeries(
            start_time=ts.time_at(idx[0]),
            values=ts.values[idx[0] : idx[-1] + 1],
            step=ts.step,
        )
    return out
