"""Composite availability series and residual load construction.

Technology portfolios and multi-region systems are both plain weighted
averages of aligned availability series; a single flat weight per
(technology, region) pair covers either axis. Residual load is demand minus
capacity-weighted availability.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, ParameterError, SeriesLookupError
from .series import AvailabilitySeries, ResidualLoadSeries, TimeSeries, as_timeseries


@dataclass(frozen=True)
class PortfolioEntry:
    technology: str
    region: str
    weight: float

    def __post_init__(self) -> None:
        w = float(self.weight)
        object.__setattr__(self, "weight", w)
        if w < 0.0:
            raise ParameterError(
                f"negative weight {w} for {self.technology}@{self.region}; "
                "capacity shares cannot be negative"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.technology, self.region)


@dataclass(frozen=True)
class PortfolioSpec:
    """Weighted (technology, region) entries; weights are normalized to 1."""

    entries: tuple[PortfolioEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(
            e if isinstance(e, PortfolioEntry) else PortfolioEntry(*e) for e in self.entries
        )
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ParameterError("a portfolio needs at least one entry")
        if sum(e.weight for e in entries) <= 0.0:
            raise ParameterError("portfolio weights must sum to a positive total")


class CapacityMap(Mapping):
    """(technology, region) -> installed capacity in power units, >= 0."""

    def __init__(self, entries):
        store: dict[tuple[str, str], float] = {}
        for key, cap in dict(entries).items():
            tech, region = key
            c = float(cap)
            if c < 0.0:
                raise ParameterError(f"negative capacity {c} for {tech}@{region}")
            store[(str(tech), str(region))] = c
        self._entries = store

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"CapacityMap({self._entries!r})"


def _check_aligned(named: list[tuple[str, TimeSeries]]) -> None:
    """All series must share start, step, and length; errors name the pair."""
    ref_name, ref = named[0]
    for name, ts in named[1:]:
        if (
            ts.start_time != ref.start_time
            or ts.step != ref.step
            or len(ts) != len(ref)
        ):
            raise AlignmentError(
                f"series {ref_name!r} and {name!r} are not aligned: "
                f"start {ref.start_time.isoformat()} vs {ts.start_time.isoformat()}, "
                f"step {ref.step} vs {ts.step}, length {len(ref)} vs {len(ts)}"
            )


def _lookup(series_set, key: tuple[str, str]) -> AvailabilitySeries:
    try:
        return series_set[key]
    except KeyError:
        raise SeriesLookupError(
            f"no availability series for technology={key[0]!r} region={key[1]!r}"
        ) from None


def compose_weighted(series_set, spec: PortfolioSpec) -> AvailabilitySeries:
    """Weighted average of availability series; weights normalize to 1.

    The result is a convex combination, so it stays inside [0, 1] (a clip
    guards against last-bit float excursions). Labels concatenate the distinct
    technologies and regions involved.
    """
    picked = [(f"{e.technology}@{e.region}", _lookup(series_set, e.key), e.weight) for e in spec.entries]
    _check_aligned([(name, a.series) for name, a, _ in picked])
    total = sum(w for _, _, w in picked)
    base = picked[0][1].series
    acc = np.zeros(len(base))
    for _, a, w in picked:
        acc += (w / total) * a.series.values
    np.clip(acc, 0.0, 1.0, out=acc)

    def joined(labels: list[str]) -> str:
        seen: list[str] = []
        for lab in labels:
            if lab not in seen:
                seen.append(lab)
        return "+".join(seen)

    return AvailabilitySeries(
        series=TimeSeries(start_time=base.start_time, values=acc, step=base.step),
        technology=joined([e.technology for e in spec.entries]),
        region=joined([e.region for e in spec.entries]),
    )


def residual_load_from_profiles(load, series_set, caps, label: str = "residual_load") -> ResidualLoadSeries:
    """rl_t = load_t - sum over (tech, region) of capacity * availability.

    load is a power-unit TimeSeries; caps maps (technology, region) to
    installed capacity and every capped pair must have an availability series
    aligned with the load.
    """
    load_ts = as_timeseries(load)
    cap_map = caps if isinstance(caps, CapacityMap) else CapacityMap(caps)
    named = [("load", load_ts)]
    picked = []
    for key in cap_map:
        a = _lookup(series_set, key)
        named.append((f"{key[0]}@{key[1]}", a.series))
        picked.append((key, a))
    _check_aligned(named)
    supply = np.zeros(len(load_ts))
    for key, a in picked:
        supply += cap_map[key] * a.series.values
    rl = load_ts.values - supply
    return ResidualLoadSeries(
        series=TimeSeries(start_time=load_ts.start_time, values=rl, step=load_ts.step),
        label=label,
    )
