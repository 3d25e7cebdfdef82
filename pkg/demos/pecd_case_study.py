"""
German onshore wind 1990-1995, how long was the worst lull?
===========================================================

Runs the low availability analysis on six years of hourly PECD capacity
factors for German onshore wind. Point SHORTFALL_PECD_CSV at a long format
CSV (timestamp, technology, region, value) holding the 1990-1995 hourly
series; without it the script explains how to prepare one and exits.

The headline numbers this reproduces: below an absolute capacity factor of
0.1 the longest uninterrupted run lasts exactly one week (168 h) and starts
in 1995, while the widest variable window whose mean stays below 0.1
stretches to 1098 h (about 46 days) and starts in late 1994.
"""

import os
import sys

from shortfall import (
    Calendar,
    detect_cbt,
    detect_vmbt,
    frequency_duration_distribution,
    ingest_csv,
    summary_stats,
    yearly_extremes,
)

ENV = "SHORTFALL_PECD_CSV"
THRES = 0.1

path = os.environ.get(ENV)
if not path:
    print(f"{ENV} is not set, nothing to analyze.")
    print()
    print("To run the case study, export the 1990-1995 hourly PECD onshore")
    print("capacity factors for Germany to a CSV with the columns")
    print("timestamp, technology, region, value (one row per hour), then:")
    print()
    print(f"  {ENV}=/path/to/pecd_de_onshore.csv python3 demos/pecd_case_study.py")
    sys.exit(0)

series = ingest_csv(path).only()
cal = Calendar.of(series)
st = summary_stats(series)
print(
    f"{series.technology}@{series.region}: {cal.length} hourly samples, "
    f"{cal.start_time:%Y-%m-%d} to {cal.end_time:%Y-%m-%d}"
)
print(f"mean capacity factor {st.mean:.3f}, {st.full_load_hours_per_year:.0f} full load hours/yr")
print()

# Plain runs below 0.1: continuous calms, gusts reset the clock.
runs = detect_cbt(series, THRES)
longest_run = max(runs, key=lambda e: e.duration)
print(f"CBT below {THRES}: {len(runs)} events")
print(
    f"  longest run {longest_run.duration} h, "
    f"starting {cal.time_at(longest_run.start_index):%Y-%m-%d %H:%M}"
)

dist = frequency_duration_distribution(runs)
print(f"  runs of at least 24 h: {dist.count_at_least(24)}")
print(f"  runs of at least 72 h: {dist.count_at_least(72)}")
print()

# Variable windows: the mean over the whole window must stay below 0.1,
# which tolerates short gusts and exposes the season scale lull.
windows = detect_vmbt(series, THRES)
longest_window = max(windows, key=lambda e: e.duration)
print(f"VMBT below {THRES}: {len(windows)} events")
print(
    f"  widest window {longest_window.duration} h "
    f"({longest_window.duration / 24:.0f} days), "
    f"starting {cal.time_at(longest_window.start_index):%Y-%m-%d %H:%M}"
)
print()

print("per year event counts and extremes (CBT):")
for row in yearly_extremes(runs, cal).rows:
    print(f"  {row.year}  {row.count:4d} events  longest {row.max_duration:4d} h")
