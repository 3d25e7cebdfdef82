"""Shared fixture builders for the test suite."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from shortfall import AvailabilitySeries, ResidualLoadSeries, TimeSeries

T0 = datetime(2001, 1, 1, tzinfo=timezone.utc)


def hourly(values, start=T0) -> TimeSeries:
    return TimeSeries(start_time=start, values=values, step=timedelta(hours=1))


def avail(values, technology="onshore", region="DE", start=T0) -> AvailabilitySeries:
    return AvailabilitySeries(series=hourly(values, start), technology=technology, region=region)


def rl(values, label="rl", start=T0) -> ResidualLoadSeries:
    return ResidualLoadSeries(series=hourly(values, start), label=label)


def random_avail(rng, n, technology="onshore", region="DE") -> AvailabilitySeries:
    return avail(rng.random(n), technology=technology, region=region)


def event_tuples(events):
    """Geometry of an event list, for comparisons against oracles."""
    return [(e.start_index, e.end_index, e.duration) for e in events]


def spa_tuples(events):
    return [
        (e.start_index, e.end_index, e.duration, e.energy_deficit, e.recovery, e.truncated)
        for e in events
    ]


def autocorrelated_availability(rng, n, rho=0.95) -> np.ndarray:
    """AR(1)-shaped availability factors squashed into [0, 1]; crude but
    produces the multi-day lulls and highs real capacity factors show."""
    shocks = rng.normal(0.0, 0.25, size=n)
    x = np.empty(n)
    x[0] = 0.0
    for i in range(1, n):
        x[i] = rho * x[i - 1] + shocks[i]
    return np.clip(0.35 + 0.35 * x, 0.0, 1.0)
