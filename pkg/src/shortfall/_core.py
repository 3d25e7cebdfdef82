"""Internal detection kernels shared by the drought and residual-load modules.

Nothing here knows about threshold orientation (below-threshold availability
vs. above-zero residual load); callers pass plain value arrays and interpret
the results.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import ParameterError


def true_runs(mask) -> list[tuple[int, int]]:
    """Maximal runs of True as inclusive (start, end) index pairs."""
    m = np.asarray(mask, dtype=bool)
    if m.size == 0:
        return []
    edges = np.diff(m.astype(np.int8))
    starts = (np.flatnonzero(edges == 1) + 1).tolist()
    ends = np.flatnonzero(edges == -1).tolist()
    if m[0]:
        starts.insert(0, 0)
    if m[-1]:
        ends.append(m.size - 1)
    return list(zip(starts, ends))


def clamped_deficit_events(deltas) -> list[tuple[int, int, float, int | None]]:
    """Sequent-peak bookkeeping: ED_t = max(0, ED_{t-1} + delta_t).

    Returns one tuple per excursion of the clamped cumulative sum above zero:
    (start, last_max_index, max_value, zero_index). start is the first index
    with ED > 0, last_max_index the last attainment of the excursion maximum,
    and zero_index the first later index where ED returns to exactly 0, or
    None when the series ends first.

    The recursion is evaluated strictly sequentially so results are bitwise
    reproducible against a step-by-step recomputation.
    """
    events: list[tuple[int, int, float, int | None]] = []
    ed = 0.0
    start = -1
    mx = 0.0
    mx_i = -1
    for t, d in enumerate(np.asarray(deltas, dtype=float).tolist()):
        ed = ed + d
        if ed <= 0.0:
            ed = 0.0
            if start >= 0:
                events.append((start, mx_i, mx, t))
                start = -1
                mx = 0.0
                mx_i = -1
        else:
            if start < 0:
                start = t
                mx = ed
                mx_i = t
            elif ed >= mx:  # >= so a tied maximum moves the anchor to its last attainment
                mx = ed
                mx_i = t
    if start >= 0:
        events.append((start, mx_i, mx, None))
    return events


class VariableWindowStartError(ValueError):
    """intdur_start admits a qualifying window; callers reword per orientation."""

    def __init__(self, worst_mean: float, win_start: int, intdur: int):
        self.worst_mean = worst_mean
        self.win_start = win_start
        self.intdur = intdur
        super().__init__(
            f"window of length {intdur} starting at index {win_start} "
            f"has mean {worst_mean}"
        )


def variable_window_events(
    values, qthres: float, intdur_start: int, step: int
) -> list[tuple[int, int, int, float]]:
    """Variable-window scan: descending window lengths, greedy exclusion.

    A window of length d qualifies when its mean is strictly below qthres and
    it lies entirely inside a contiguous segment not yet claimed by an earlier
    event. Lengths run from intdur_start down to 1 in decrements of `step`
    (1 is appended when the decrement skips it). Within one length, the
    qualifying window with the lowest mean is accepted first (ties broken by
    earliest start), the segment is split around it, and the scan repeats at
    the same length until nothing qualifies.

    Raises VariableWindowStartError if some window of length intdur_start
    already qualifies; windows longer than the series are vacuously fine.

    Returns (start, end, length, mean) tuples sorted by start.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if not isinstance(intdur_start, (int, np.integer)) or intdur_start < 1:
        raise ParameterError(f"intdur_start must be a positive integer, got {intdur_start!r}")
    if not isinstance(step, (int, np.integer)) or step < 1:
        raise ParameterError(f"step must be a positive integer, got {step!r}")

    prefix = np.concatenate([[0.0], np.cumsum(v)])

    def window_means(a: int, b: int, d: int) -> np.ndarray:
        # means of every length-d window inside the inclusive segment [a, b]
        return (prefix[a + d : b + 2] - prefix[a : b - d + 2]) / d

    if intdur_start <= n:
        means = window_means(0, n - 1, int(intdur_start))
        i = int(np.argmin(means))
        if means[i] < qthres:
            raise VariableWindowStartError(float(means[i]), i, int(intdur_start))

    lengths = list(range(int(intdur_start), 0, -int(step)))
    if lengths[-1] != 1:
        lengths.append(1)

    def push(heap: list, a: int, b: int, d: int) -> None:
        if b - a + 1 < d:
            return
        means = window_means(a, b, d)
        i = int(np.argmin(means))  # first occurrence = earliest start inside the segment
        if means[i] < qthres:
            heapq.heappush(heap, (float(means[i]), a + i, a, b))

    segments: set[tuple[int, int]] = {(0, n - 1)}
    found: list[tuple[int, int, int, float]] = []
    for d in lengths:
        if d > n:
            continue
        heap: list = []
        for a, b in segments:
            push(heap, a, b, d)
        while heap:
            mean, j, a, b = heapq.heappop(heap)
            if (a, b) not in segments:
                continue  # the segment was split after this entry was queued
            found.append((j, j + d - 1, d, mean))
            segments.discard((a, b))
            if j - 1 >= a:
                segments.add((a, j - 1))
                push(heap, a, j - 1, d)
            if b >= j + d:
                segments.add((j + d, b))
                push(heap, j + d, b, d)
    found.sort(key=lambda e: e[0])
    return found
