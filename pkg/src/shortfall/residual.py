"""Positive residual load event detection: CAZ, FMAZ, VMAZ, SPA variants.

Residual load rl_t = load - VRE supply, in power units; any period with
rl_t > 0 is a supply gap. The zero line plays the role the threshold plays
for droughts, so these methods mirror their drought counterparts with the
qualification flipped to strictly-above-zero. Energy deficits are reported in
energy units (power * step_hours).

The SPA variant additionally supports a storage round-trip efficiency: with
eff < 1, surplus periods between deficits offset less stored energy, which
stretches events and recovery periods (see adjust_residual_load).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import (
    VariableWindowStartError,
    clamped_deficit_events,
    true_runs,
    variable_window_events,
)
from .errors import ParameterError
from .events import Method, ShortageEvent
from .series import ResidualLoadSeries, TimeSeries, as_timeseries, moving_average
from .thresholds import ZERO_LINE


@dataclass(frozen=True)
class StorageEfficiency:
    """Round-trip efficiency of the long-duration storage, in (0, 1]."""

    eff_roundtrip: float

    def __post_init__(self) -> None:
        e = float(self.eff_roundtrip)
        object.__setattr__(self, "eff_roundtrip", e)
        if not 0.0 < e <= 1.0:
            raise ParameterError(f"eff_roundtrip must lie in (0, 1], got {e}")


def _eff_value(eff) -> float:
    if isinstance(eff, StorageEfficiency):
        return eff.eff_roundtrip
    return StorageEfficiency(float(eff)).eff_roundtrip


def adjust_residual_load(rl, eff, literal_eq8: bool = False):
    """Discount surplus (negative) residual load for storage losses.

    One unit of surplus charged into storage returns only eff units, so the
    default maps rl -> rl*eff for rl < 0 and leaves deficits untouched;
    eff=1 is the identity. literal_eq8=True divides negative values by eff
    instead, which enlarges surplus magnitude and shortens recovery; it is
    kept only for reproducing that exact formula.

    Accepts a ResidualLoadSeries, TimeSeries, or plain array and returns the
    same kind.
    """
    e = _eff_value(eff)
    if isinstance(rl, ResidualLoadSeries):
        adjusted = adjust_residual_load(rl.series, e, literal_eq8)
        return ResidualLoadSeries(series=adjusted, label=rl.label)
    if isinstance(rl, TimeSeries):
        return rl.replace_values(adjust_residual_load(rl.values, e, literal_eq8))
    v = np.array(rl, dtype=float)
    neg = v < 0.0
    if literal_eq8:
        v[neg] = v[neg] / e
    else:
        v[neg] = v[neg] * e
    return v


def detect_caz(rl) -> list[ShortageEvent]:
    """Maximal runs of strictly positive residual load.

    The deficit of a run is sum(rl_t) * step_hours; summed over all events
    this partitions the total positive residual energy of the series.
    """
    ts = as_timeseries(rl)
    v = ts.values
    h = ts.step_hours
    out = []
    for a, b in true_runs(v > 0.0):
        ed = float(np.sum(v[a : b + 1]) * h)
        out.append(
            ShortageEvent(
                method=Method.CAZ,
                start_index=a,
                end_index=b,
                duration=b - a + 1,
                energy_deficit=ed,
                threshold=ZERO_LINE,
            )
        )
    return out


def detect_fmaz(rl, intdur: int) -> list[ShortageEvent]:
    """Maximal runs where the intdur-sample moving average of rl is positive.

    Indices refer to moving-average positions exactly as in detect_fmbt;
    deficits sum the moving-average values times step_hours. intdur=1
    reproduces detect_caz exactly.
    """
    ts = as_timeseries(rl)
    ma = moving_average(ts, intdur)
    h = ts.step_hours
    out = []
    for a, b in true_runs(ma.values > 0.0):
        s = a + ma.offset
        e = b + ma.offset
        ed = float(np.sum(ma.values[a : b + 1]) * h)
        out.append(
            ShortageEvent(
                method=Method.FMAZ,
                start_index=s,
                end_index=e,
                duration=e - s + 1,
                energy_deficit=ed,
                threshold=ZERO_LINE,
                intdur=int(intdur),
            )
        )
    return out


def detect_vmaz(rl, intdur_start: int | None = None, step: int = 1) -> list[ShortageEvent]:
    """Variable-window scan for positive-mean windows, longest first.

    Mirrors detect_vmbt with the qualification flipped: a window qualifies
    when its mean is strictly above zero, and the most severe window (highest
    mean, ties broken by earliest start) is claimed first within each length.
    intdur_start (default: series length) must be large enough that no window
    of that length has positive mean.

    Implemented by running the below-threshold core on -rl against a zero
    line; negation is exact in floating point, so ordering and strictness
    mirror detect_vmbt bit for bit.
    """
    ts = as_timeseries(rl)
    v = ts.values
    h = ts.step_hours
    if intdur_start is None:
        intdur_start = len(ts)
    try:
        windows = variable_window_events(-v, 0.0, intdur_start, step)
    except VariableWindowStartError as err:
        raise ParameterError(
            f"intdur_start={intdur_start} is too small: the window of length "
            f"{err.intdur} starting at index {err.win_start} has mean "
            f"{-err.worst_mean} above zero; use a larger intdur_start"
        ) from None
    out = []
    for s, e, d, _mean in windows:
        ed = float(np.sum(v[s : e + 1]) * h)
        out.append(
            ShortageEvent(
                method=Method.VMAZ,
                start_index=s,
                end_index=e,
                duration=d,
                energy_deficit=ed,
                threshold=ZERO_LINE,
                intdur=d,
            )
        )
    return out


def detect_spa_prl(rl, eff=1.0, literal_eq8: bool = False) -> list[ShortageEvent]:
    """Sequent peak algorithm on residual load, optionally storage-adjusted.

    Tracks ED_t = max(0, ED_{t-1} + rl_t) on the (possibly efficiency-
    adjusted) residual load. Event geometry matches detect_spa_drought: start
    at the first positive ED, duration to the last attainment of the maximum,
    recovery from there to the exact return to zero, truncated=True when the
    series ends first.

    Positive flows enter the recursion unadjusted, so the reported deficit
    (maximum ED * step_hours) measures firm energy need; eff only changes how
    fast surplus periods drain it. eff=1 leaves the series untouched and tags
    events SPA_PRL; eff < 1 tags them SPA_ADJ.
    """
    ts = as_timeseries(rl)
    e = _eff_value(eff)
    adj = adjust_residual_load(ts.values, e, literal_eq8)
    h = ts.step_hours
    method = Method.SPA_PRL if e == 1.0 else Method.SPA_ADJ
    out = []
    for start, mx_i, mx, zero_i in clamped_deficit_events(adj):
        out.append(
            ShortageEvent(
                method=method,
                start_index=start,
                end_index=mx_i,
                duration=mx_i - start + 1,
                energy_deficit=mx * h,
                threshold=ZERO_LINE,
                recovery=None if zero_i is None else zero_i - mx_i,
                truncated=zero_i is None,
            )
        )
    return out
