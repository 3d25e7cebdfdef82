"""
Five ways to slice the same wind lull
=====================================

One synthetic availability series, one absolute threshold, five detection
methods. The interesting part is that they disagree on purpose: plain runs
count only uninterrupted time below the threshold, window based methods
tolerate short spikes inside a lull, and the sequent peak view tracks the
accumulated energy gap until the series has paid it back.
"""

import numpy as np

from shortfall import (
    AvailabilitySeries,
    TimeSeries,
    detect_cbt,
    detect_fmbt,
    detect_spa_drought,
    detect_vmbt,
    detect_windows,
)
from datetime import datetime, timedelta, timezone

THRES = 0.3

# Build a two week hourly series by hand. The first week is calm with two
# one hour gusts interrupting an otherwise continuous lull, the second week
# is windy. The gusts are what separates the methods.
calm = [0.1] * 36 + [0.8] + [0.15] * 30 + [0.9] + [0.12] * 40 + [0.2] * 60
windy = [0.7 + 0.05 * np.sin(i / 7.0) for i in range(336 - len(calm))]
values = np.array(calm + windy)

series = AvailabilitySeries(
    series=TimeSeries(
        start_time=datetime(2010, 1, 1, tzinfo=timezone.utc),
        values=values,
        step=timedelta(hours=1),
    ),
    technology="onshore",
    region="DE",
)

print(f"series: {len(values)} hourly samples, mean availability {values.mean():.3f}")
print(f"threshold: absolute {THRES}")
print()


def show(title, events):
    print(title)
    if not events:
        print("  (no events)")
    for e in events:
        extra = ""
        if e.intdur is not None:
            extra = f"  intdur={e.intdur}"
        if e.recovery is not None:
            extra += f"  recovery={e.recovery}"
        print(
            f"  start={e.start_index:4d}  end={e.end_index:4d}  "
            f"duration={e.duration:4d}  deficit={e.energy_deficit:8.2f}{extra}"
        )
    print()


# 1. Plain runs: every sample strictly below the threshold, gusts split them.
show("CBT, maximal runs below the threshold", detect_cbt(series, THRES))

# 2. Fixed windows: non overlapping 24 h blocks packed into those runs,
#    so only runs of at least a day contribute.
show("WINDOW, fixed 24 h blocks inside runs", detect_windows(series, THRES, window_len=24))

# 3. Moving average runs: a 24 h lagging mean smooths the gusts away and the
#    lull shows up as one event instead of three.
show("FMBT, 24 h moving average below the threshold", detect_fmbt(series, THRES, intdur=24))

# 4. Variable windows: the scan widens each event as far as the window mean
#    stays below the threshold, which absorbs the gusts too.
show("VMBT, widest windows with mean below the threshold", detect_vmbt(series, THRES))

# 5. Sequent peak: accumulate (threshold - availability), clamp at zero.
#    The event ends at the deficit peak and the recovery column counts the
#    extra hours until the surplus has refilled the gap.
show("SPA, accumulated deficit until payback", detect_spa_drought(series, THRES))

# The single lull in week one is the same physical episode everywhere, the
# methods just answer different questions about it.
durs = {
    "CBT": max(e.duration for e in detect_cbt(series, THRES)),
    "FMBT": max(e.duration for e in detect_fmbt(series, THRES, intdur=24)),
    "VMBT": max(e.duration for e in detect_vmbt(series, THRES)),
    "SPA": max(e.duration for e in detect_spa_drought(series, THRES)),
}
print("longest event by method:", ", ".join(f"{k}={v} h" for k, v in durs.items()))
