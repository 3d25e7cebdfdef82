"""Synthetic capacity factor generators shared by the demo scripts.

Not meant to be realistic, only to show the right qualitative shape: wind as
a persistent AR(1) process with multi-day lulls, solar as a clipped diurnal
bump modulated by slow cloudiness, load as a flat base with daily and yearly
cycles.
"""

from datetime import datetime, timedelta, timezone

import numpy as np

from shortfall import AvailabilitySeries, TimeSeries

T0 = datetime(2015, 1, 1, tzinfo=timezone.utc)


def _hourly(values):
    return TimeSeries(start_time=T0, values=values, step=timedelta(hours=1))


def synthetic_wind(n=8760, seed=0, technology="onshore", region="DE"):
    rng = np.random.default_rng(seed)
    shocks = rng.normal(0.0, 0.22, size=n)
    x = np.empty(n)
    x[0] = 0.0
    for i in range(1, n):
        x[i] = 0.96 * x[i - 1] + shocks[i]
    cf = np.clip(0.3 + 0.3 * x, 0.0, 1.0)
    return AvailabilitySeries(series=_hourly(cf), technology=technology, region=region)


def synthetic_solar(n=8760, seed=0, technology="solar", region="DE"):
    rng = np.random.default_rng(seed + 1)
    hour = np.arange(n) % 24
    # daylight bump between 06:00 and 18:00, zero at night
    bump = np.clip(np.sin((hour - 6.0) / 12.0 * np.pi), 0.0, None)
    # cloudiness wanders slowly between 0.2 and 1.0
    walk = np.cumsum(rng.normal(0.0, 0.03, size=n))
    cloud = 0.6 + 0.4 * np.tanh(walk / 4.0)
    cf = np.clip(bump * cloud * 0.8, 0.0, 1.0)
    return AvailabilitySeries(series=_hourly(cf), technology=technology, region=region)


def synthetic_load(n=8760, seed=0, base=40.0):
    """Demand in GW with a morning/evening double peak and a mild seasonal swing."""
    rng = np.random.default_rng(seed + 2)
    hour = np.arange(n) % 24
    day = np.arange(n) / 24.0
    daily = 6.0 * np.exp(-((hour - 8.5) ** 2) / 8.0) + 7.0 * np.exp(-((hour - 19.0) ** 2) / 10.0)
    seasonal = 5.0 * np.cos(2.0 * np.pi * day / 365.25)
    noise = rng.normal(0.0, 0.8, size=n)
    return _hourly(base + daily + seasonal + noise)
