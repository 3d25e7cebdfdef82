"""Threshold strategies and their resolution against a concrete series.

Four strategies are supported:

    absolute       thres = value, value in [0, 1]
    mean_fraction  thres = frac * mean(series), frac in (0, 1]
    percentile     thres = p-th percentile of the values, p in (0, 100)
    max_fraction   thres = f * max(series), f in (0, 1]

mean_fraction is the recommended default for cross-technology and
cross-region comparisons: two series that differ only by a positive scale
factor produce identical event index sets under the same fraction, so systems
with different full-load-hour levels stay comparable. A resolved threshold is
attached to every emitted event for provenance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .series import as_timeseries, series_id

THRESHOLD_KINDS = ("absolute", "mean_fraction", "percentile", "max_fraction")


@dataclass(frozen=True)
class ThresholdSpec:
    """One threshold strategy plus its parameter, before resolution."""

    kind: str
    param: float

    def __post_init__(self) -> None:
        if self.kind not in THRESHOLD_KINDS:
            raise ParameterError(
                f"unknown threshold kind {self.kind!r}; expected one of {THRESHOLD_KINDS}"
            )
        p = float(self.param)
        object.__setattr__(self, "param", p)
        if self.kind == "absolute" and not 0.0 <= p <= 1.0:
            raise ParameterError(f"absolute threshold must lie in [0, 1], got {p}")
        if self.kind == "mean_fraction" and not 0.0 < p <= 1.0:
            raise ParameterError(f"mean fraction must lie in (0, 1], got {p}")
        if self.kind == "percentile" and not 0.0 < p < 100.0:
            raise ParameterError(f"percentile must lie in (0, 100), got {p}")
        if self.kind == "max_fraction" and not 0.0 < p <= 1.0:
            raise ParameterError(f"max fraction must lie in (0, 1], got {p}")

    @classmethod
    def absolute(cls, value: float) -> "ThresholdSpec":
        return cls("absolute", value)

    @classmethod
    def mean_fraction(cls, frac: float) -> "ThresholdSpec":
        return cls("mean_fraction", frac)

    @classmethod
    def percentile(cls, p: float) -> "ThresholdSpec":
        return cls("percentile", p)

    @classmethod
    def max_fraction(cls, f: float) -> "ThresholdSpec":
        return cls("max_fraction", f)


@dataclass(frozen=True)
class ZeroLine:
    """Marker for the fixed zero threshold of residual-load methods."""

    @property
    def value(self) -> float:
        return 0.0

    @property
    def kind(self) -> str:
        return "zero"


ZERO_LINE = ZeroLine()


@dataclass(frozen=True)
class ResolvedThreshold:
    """A threshold value tied to the spec and series it was resolved from."""

    value: float
    spec: ThresholdSpec
    series_id: str = ""

    @property
    def kind(self) -> str:
        return self.spec.kind


def resolve_threshold(spec: ThresholdSpec, series, series_id_: str | None = None) -> ResolvedThreshold:
    """Resolve a ThresholdSpec against a series.

    Accepts an AvailabilitySeries or a bare TimeSeries. No [0, 1] clamp is
    applied to the result: against a genuine availability series the
    data-driven strategies land in [0, 1] by construction, and bare series
    (e.g. scaled copies in comparability checks) resolve to the scaled value.
    """
    ts = as_timeseries(series)
    values = ts.values
    if spec.kind == "absolute":
        value = spec.param
    elif spec.kind == "mean_fraction":
        value = spec.param * float(np.mean(values))
    elif spec.kind == "percentile":
        value = float(np.percentile(values, spec.param))
    else:  # max_fraction
        value = spec.param * float(np.max(values))
    sid = series_id(series) if series_id_ is None else series_id_
    return ResolvedThreshold(value=float(value), spec=spec, series_id=sid)


def threshold_sweep(kind: str, params, series, series_id_: str | None = None) -> list[ResolvedThreshold]:
    """Resolve one strategy for several parameter values (e.g. frac 0.1..0.9)."""
    return [resolve_threshold(ThresholdSpec(kind, p), series, series_id_) for p in params]
