"""
Residual load events and the cost of imperfect storage
======================================================

Residual load is demand minus VRE infeed. Hours where it is positive need
dispatchable backup or discharge from storage; hours where it is negative
produce surplus that storage can absorb. The sequent peak view sizes the
reservoir that bridges each shortage episode, and a round trip efficiency
below one shrinks every surplus before it can refill the store, so events
take longer to pay back.
"""

import numpy as np

from shortfall import (
    CapacityMap,
    adjust_residual_load,
    detect_caz,
    detect_fmaz,
    detect_spa_prl,
    detect_vmaz,
    residual_load_from_profiles,
)

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from demo_series import synthetic_load, synthetic_solar, synthetic_wind

N = 4380  # half a year keeps the printed tables short
wind = synthetic_wind(n=N, seed=11)
solar = synthetic_solar(n=N, seed=11)
load = synthetic_load(n=N, seed=11)

# 130 GW onshore and 80 GW solar against roughly 45 GW of demand, a system
# that produces surplus on average but still runs dry in long wind lulls.
caps = CapacityMap({("onshore", "DE"): 130.0, ("solar", "DE"): 80.0})
pool = {("onshore", "DE"): wind, ("solar", "DE"): solar}
rl = residual_load_from_profiles(load, pool, caps)

vals = rl.series.values
print(
    f"residual load over {N} h: mean {vals.mean():6.2f} GW, "
    f"{int((vals > 0).sum())} h positive, {int((vals < 0).sum())} h negative"
)
print()

# Runs of positive residual load, with and without pooling. The 12 h moving
# average merges shortage blocks that a brief wind pickup would otherwise
# split, the variable window scan stretches them as far as the mean stays
# positive.
caz = detect_caz(rl)
fmaz = detect_fmaz(rl, intdur=12)
vmaz = detect_vmaz(rl)
for name, ev in (("CAZ", caz), ("FMAZ(12)", fmaz), ("VMAZ", vmaz)):
    longest = max(ev, key=lambda e: e.duration)
    print(
        f"{name:9s} {len(ev):4d} events, longest {longest.duration:4d} h "
        f"starting at index {longest.start_index}, deficit {longest.energy_deficit:8.1f} GWh"
    )
print()

# Sequent peak with a storage round trip efficiency. eff=1.0 is the ideal
# store; real batteries or hydrogen chains sit well below that. Every
# negative residual load hour is discounted by eff before it reduces the
# accumulated deficit.
print("storage sweep (eff, events, largest deficit GWh, its recovery h):")
for eff in (1.0, 0.9, 0.75, 0.5, 0.36):
    events = detect_spa_prl(rl, eff=eff)
    worst = max(events, key=lambda e: e.energy_deficit)
    rec = "open" if worst.recovery is None else f"{worst.recovery}"
    print(
        f"  {eff:4.2f}  {len(events):4d}  {worst.energy_deficit:10.1f}  {rec:>6s}"
        f"  (method tag {events[0].method.value})"
    )
print()

# The discount itself is a one liner on the raw series. The default form
# multiplies surpluses by eff, so one stored unit returns only eff units.
# literal_eq8=True divides instead, which enlarges the surplus; mind the
# sign of the effect before reaching for it.
adj_mult = adjust_residual_load(rl, eff=0.5)
adj_div = adjust_residual_load(rl, eff=0.5, literal_eq8=True)
neg = vals < 0
print(
    "surplus energy after adjusting at eff=0.5 "
    f"(raw {vals[neg].sum():9.1f} GWh): "
    f"multiply {adj_mult.series.values[neg].sum():9.1f}, "
    f"divide {adj_div.series.values[neg].sum():9.1f}"
)
worst_m = max(detect_spa_prl(rl, eff=0.5), key=lambda e: e.energy_deficit)
worst_d = max(detect_spa_prl(rl, eff=0.5, literal_eq8=True), key=lambda e: e.energy_deficit)
print(
    f"largest accumulated deficit: multiply {worst_m.energy_deficit:9.1f} GWh, "
    f"divide {worst_d.energy_deficit:9.1f} GWh"
)
