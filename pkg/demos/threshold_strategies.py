"""
Absolute thresholds do not travel between technologies
======================================================

A fixed cutoff like 0.1 means something different for onshore wind (capacity
factor around 0.25) than for solar (around 0.12 with a hard day/night cycle).
Relative strategies anchor the cutoff to the series itself: a fraction of its
mean, a percentile of its duration curve, or a fraction of its maximum.
"""

import numpy as np

from shortfall import (
    ThresholdSpec,
    detect_cbt,
    resolve_threshold,
    summary_stats,
    threshold_sweep,
)

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from demo_series import synthetic_solar, synthetic_wind

wind = synthetic_wind(n=8760, seed=3)
solar = synthetic_solar(n=8760, seed=3)

for name, s in (("onshore wind", wind), ("solar pv", solar)):
    st = summary_stats(s)
    print(
        f"{name:12s}  mean={st.mean:.3f}  "
        f"p10={st.percentile(10):.3f}  flh/yr={st.full_load_hours_per_year:7.0f}"
    )
print()

# The same absolute threshold produces wildly different pictures.
for name, s in (("onshore wind", wind), ("solar pv", solar)):
    ev = detect_cbt(s, resolve_threshold(ThresholdSpec("absolute", 0.1), s))
    print(f"absolute 0.1 on {name:12s}: {len(ev):4d} events, "
          f"{sum(e.duration for e in ev):5d} h below")
print()

# Anchoring at half the mean puts both technologies on comparable footing.
for kind, param in (("mean_fraction", 0.5), ("percentile", 10.0), ("max_fraction", 0.2)):
    print(f"{kind}({param}):")
    for name, s in (("onshore wind", wind), ("solar pv", solar)):
        rth = resolve_threshold(ThresholdSpec(kind, param), s)
        ev = detect_cbt(s, rth)
        print(
            f"  {name:12s} resolves to {rth.value:.4f}  "
            f"-> {len(ev):4d} events, {sum(e.duration for e in ev):5d} h below"
        )
    print()

# Sweeps resolve a whole family of cutoffs in one call, handy for scanning
# how event statistics respond to the severity level.
print("mean_fraction sweep on wind (fraction, cutoff, events, longest):")
for rth in threshold_sweep("mean_fraction", np.linspace(0.2, 0.8, 4), wind):
    ev = detect_cbt(wind, rth)
    longest = max((e.duration for e in ev), default=0)
    print(
        f"  {rth.spec.param:.2f}  {rth.value:.4f}  {len(ev):5d}  {longest:5d} h"
    )
