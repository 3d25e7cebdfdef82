"""Drought detection in availability series: window, CBT, FMBT, VMBT, SPA.

All methods take an AvailabilitySeries (or a bare TimeSeries) and a threshold,
and return ShortageEvent lists sorted by start index. Qualification is always
strict: a sample or window mean exactly equal to the threshold is not a
drought. Energy deficits are threshold-relative sums in availability*samples.

Method overview:

    detect_windows  fixed-length windows packed into below-threshold runs;
                    biased short, kept for comparison
    detect_cbt      maximal runs of avail < thres
    detect_fmbt     maximal runs of a fixed-length moving average < thres;
                    pools nearby CBT events into one
    detect_vmbt     variable-length window scan, longest windows first;
                    yields the longest event durations
    detect_spa_drought
                    sequent peak algorithm on the cumulative deficit;
                    bridges brief above-threshold interruptions
"""

from __future__ import annotations

import numpy as np

from ._core import (
    VariableWindowStartError,
    clamped_deficit_events,
    true_runs,
    variable_window_events,
)
from .errors import ParameterError
from .events import Method, ShortageEvent
from .series import as_timeseries, moving_average, series_id
from .thresholds import ResolvedThreshold, ThresholdSpec


def _resolved(thres, series) -> ResolvedThreshold:
    """Accept a ResolvedThreshold as-is or wrap a bare number as absolute."""
    if isinstance(thres, ResolvedThreshold):
        return thres
    if isinstance(thres, (int, float, np.floating)):
        return ResolvedThreshold(
            value=float(thres),
            spec=ThresholdSpec.absolute(float(thres)),
            series_id=series_id(series),
        )
    raise ParameterError(f"threshold must be a ResolvedThreshold or a number, got {thres!r}")


def detect_cbt(avail, thres) -> list[ShortageEvent]:
    """Maximal runs of strictly below-threshold samples.

    The union of the returned events is exactly the set of below-threshold
    samples; the energy deficit of a run is sum(thres - avail_t) over it.
    """
    ts = as_timeseries(avail)
    rth = _resolved(thres, avail)
    v = ts.values
    t = rth.value
    out = []
    for a, b in true_runs(v < t):
        ed = float(np.sum(t - v[a : b + 1]))
        out.append(
            ShortageEvent(
                method=Method.CBT,
                start_index=a,
                end_index=b,
                duration=b - a + 1,
                energy_deficit=ed,
                threshold=rth,
            )
        )
    return out


def detect_windows(avail, thres, window_len: int) -> list[ShortageEvent]:
    """Fixed-length windows packed from the start of each below-threshold run.

    A run of length L yields floor(L / window_len) events of duration
    window_len. Underestimates durations and overestimates counts relative to
    CBT; provided for comparison with window-based studies.
    """
    ts = as_timeseries(avail)
    rth = _resolved(thres, avail)
    n = len(ts)
    if not isinstance(window_len, (int, np.integer)) or window_len < 1:
        raise ParameterError(f"window_len must be a positive integer, got {window_len!r}")
    if window_len > n:
        raise ParameterError(f"window_len {window_len} exceeds series length {n}")
    v = ts.values
    t = rth.value
    out = []
    for a, b in true_runs(v < t):
        count = (b - a + 1) // window_len
        for k in range(count):
            s = a + k * window_len
            e = s + window_len - 1
            ed = float(np.sum(t - v[s : e + 1]))
            out.append(
                ShortageEvent(
                    method=Method.WINDOW,
                    start_index=s,
                    end_index=e,
                    duration=window_len,
                    energy_deficit=ed,
                    threshold=rth,
                )
            )
    return out


def detect_fmbt(avail, thres, intdur: int, deficit_basis: str = "moving_average") -> list[ShortageEvent]:
    """Maximal runs where the intdur-sample moving average is below threshold.

    Event indices refer to moving-average positions (window ends); the
    underlying raw span [start - intdur + 1, end] is available on each event
    as source_span. With intdur=1 this reduces to detect_cbt exactly.

    deficit_basis selects the energy deficit bookkeeping:
      "moving_average"  sum(thres - MA_t) over the event (the method's own ED)
      "original"        sum of raw below-threshold deficits over the raw span,
                        i.e. the CBT deficit of the pooled underlying events
    """
    ts = as_timeseries(avail)
    rth = _resolved(thres, avail)
    if deficit_basis not in ("moving_average", "original"):
        raise ParameterError(
            f"deficit_basis must be 'moving_average' or 'original', got {deficit_basis!r}"
        )
    ma = moving_average(ts, intdur)
    t = rth.value
    v = ts.values
    out = []
    for a, b in true_runs(ma.values < t):
        s = a + ma.offset
        e = b + ma.offset
        if deficit_basis == "moving_average":
            ed = float(np.sum(t - ma.values[a : b + 1]))
        else:
            raw = v[s - intdur + 1 : e + 1]
            ed = float(np.sum(np.clip(t - raw, 0.0, None)))
        out.append(
            ShortageEvent(
                method=Method.FMBT,
                start_index=s,
                end_index=e,
                duration=e - s + 1,
                energy_deficit=ed,
                threshold=rth,
                intdur=int(intdur),
            )
        )
    return out


def detect_vmbt(avail, thres, intdur_start: int | None = None, step: int = 1) -> list[ShortageEvent]:
    """Variable-window scan: longest below-threshold windows claimed first.

    Window lengths descend from intdur_start (default: the series length) in
    decrements of `step`; at each length, windows whose mean is strictly below
    the threshold are accepted lowest-mean-first (ties: earliest start) and
    their samples are excluded from all later windows, which must fit inside
    a contiguous unclaimed segment. Each event's duration equals the window
    length that claimed it.

    intdur_start must be large enough that no window of that length
    qualifies; the default always satisfies this unless the whole series mean
    is below the threshold. step > 1 trades completeness for speed and is
    mainly useful on long hourly series.

    The reported energy deficit sums thres - avail over the claimed window and
    is informational: accepted windows have means just under the threshold, so
    it is near zero by construction.
    """
    ts = as_timeseries(avail)
    rth = _resolved(thres, avail)
    v = ts.values
    t = rth.value
    if intdur_start is None:
        intdur_start = len(ts)
    try:
        windows = variable_window_events(v, t, intdur_start, step)
    except VariableWindowStartError as err:
        raise ParameterError(
            f"intdur_start={intdur_start} is too small: the window of length "
            f"{err.intdur} starting at index {err.win_start} has mean "
            f"{err.worst_mean} below threshold {t}; use a larger intdur_start"
        ) from None
    out = []
    for s, e, d, _mean in windows:
        ed = float(np.sum(t - v[s : e + 1]))
        out.append(
            ShortageEvent(
                method=Method.VMBT,
                start_index=s,
                end_index=e,
                duration=d,
                energy_deficit=ed,
                threshold=rth,
                intdur=d,
            )
        )
    return out


def detect_spa_drought(avail, thres) -> list[ShortageEvent]:
    """Sequent peak algorithm on the cumulative threshold deficit.

    Tracks ED_t = max(0, ED_{t-1} + thres - avail_t). Each excursion above
    zero is one event: it starts at the first positive ED, ends (for duration
    purposes) at the last attainment of the excursion maximum, and its energy
    deficit is that maximum. recovery counts the samples from the maximum to
    the exact return to zero; if the series ends while ED > 0 the event is
    kept with truncated=True and no recovery.
    """
    ts = as_timeseries(avail)
    rth = _resolved(thres, avail)
    deltas = rth.value - ts.values
    out = []
    for start, mx_i, mx, zero_i in clamped_deficit_events(deltas):
        out.append(
            ShortageEvent(
                method=Method.SPA,
                start_index=start,
                end_index=mx_i,
                duration=mx_i - start + 1,
                energy_deficit=mx,
                threshold=rth,
                recovery=None if zero_i is None else zero_i - mx_i,
                truncated=zero_i is None,
            )
        )
    return out
