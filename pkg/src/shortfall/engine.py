"""Batch execution of a RunConfig: series pool, combination sweep, artifacts.

Every (series, threshold, method, parameters) combination yields three files
named by a slug: <slug>.events.csv, <slug>.freqdur.csv, <slug>.yearly.csv. A
manifest.json lists each combination with its resolved threshold value and
parameters, plus the ingestion gap-fill log.

Combinations run in a thread pool. Each one is pure compute plus writes to
its own staging files, so results are byte-identical for any parallelism
degree. Staged files move into the output directory only after every
combination succeeds; a failure removes the staging area and leaves the
output directory untouched.
"""

from __future__ import annotations

import json
import os
import re
import shutil
import tempfile
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig
from .droughts import detect_cbt, detect_fmbt, detect_spa_drought, detect_vmbt, detect_windows
from .errors import EngineError, ParameterError, SeriesLookupError
from .events import Method
from .io import ingest_csv
from .portfolio import compose_weighted, residual_load_from_profiles
from .reporting import (
    export_events,
    frequency_duration_distribution,
    write_distribution_csv,
    write_yearly_csv,
    yearly_extremes,
)
from .residual import detect_caz, detect_fmaz, detect_spa_prl, detect_vmaz
from .series import AvailabilitySeries, ResidualLoadSeries, TimeSeries
from .thresholds import resolve_threshold


def build_series_pool(cfg: RunConfig):
    """Ingest all inputs and derive portfolios and residual loads.

    Returns (pool, fills): pool maps series id to its object, fills is the
    concatenated gap-fill log. Name collisions are errors; derived series
    must not shadow ingested ones.
    """
    pool: dict[str, object] = {}
    fills = []

    def add(sid: str, obj) -> None:
        if sid in pool:
            raise ParameterError(f"series id {sid!r} defined twice in the pool")
        pool[sid] = obj

    for spec in cfg.inputs:
        result = ingest_csv(
            spec.path,
            spec.columns,
            role=spec.role,
            step=cfg.step,
            max_fill_gap=spec.max_fill_gap,
        )
        for sid, obj in result.series.items():
            add(sid, obj)
        fills.extend(result.fills)

    by_key = {
        (a.technology, a.region): a for a in pool.values() if isinstance(a, AvailabilitySeries)
    }
    for pc in cfg.portfolios:
        composite = compose_weighted(by_key, pc.spec)
        add(pc.name, composite)
    for rc in cfg.residual_loads:
        if rc.load not in pool:
            raise SeriesLookupError(f"residual load {rc.name!r}: no series named {rc.load!r}")
        load = pool[rc.load]
        if not isinstance(load, TimeSeries):
            raise ParameterError(
                f"residual load {rc.name!r}: series {rc.load!r} is not a load series"
            )
        add(rc.name, residual_load_from_profiles(load, by_key, dict(rc.capacities), label=rc.name))
    return pool, tuple(fills)


# ---------------------------------------------------------------------------
# Combination enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Combination:
    series_id: str
    method: Method
    params: tuple  # (key, value) pairs, sorted
    threshold: object  # ThresholdSpec, or None for PRL methods
    slug: str

    @property
    def param_dict(self) -> dict:
        return dict(self.params)


def _slugify(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text)


def _combo_slug(sid: str, method: Method, threshold, params: dict) -> str:
    parts = [_slugify(sid), method.value.lower()]
    if threshold is None:
        parts.append("zero")
    else:
        parts.append(_slugify(f"{threshold.kind}-{threshold.param!r}"))
    for key in sorted(params):
        parts.append(_slugify(f"{key}-{params[key]!r}"))
    return "__".join(parts)


def enumerate_combinations(cfg: RunConfig, pool) -> list[Combination]:
    """Expand all analyses into concrete combinations, validating references."""
    combos: list[Combination] = []
    seen: dict[str, str] = {}

    def push(sid, method, params, threshold) -> None:
        slug = _combo_slug(sid, method, threshold, params)
        if slug in seen:
            raise ParameterError(f"duplicate analysis combination {slug!r}")
        seen[slug] = sid
        combos.append(
            Combination(
                series_id=sid,
                method=method,
                params=tuple(sorted(params.items())),
                threshold=threshold,
                slug=slug,
            )
        )

    for analysis in cfg.droughts:
        for sid in analysis.series:
            if sid not in pool:
                raise SeriesLookupError(f"droughts analysis names unknown series {sid!r}")
            if not isinstance(pool[sid], AvailabilitySeries):
                raise ParameterError(f"droughts analysis needs an availability series, {sid!r} is not one")
            for mc in analysis.methods:
                for method, params in mc.expand():
                    for th in analysis.thresholds:
                        push(sid, method, params, th)
    for analysis in cfg.prl:
        for sid in analysis.series:
            if sid not in pool:
                raise SeriesLookupError(f"prl analysis names unknown series {sid!r}")
            if not isinstance(pool[sid], ResidualLoadSeries):
                raise ParameterError(f"prl analysis needs a residual load series, {sid!r} is not one")
            for mc in analysis.methods:
                for method, params in mc.expand():
                    push(sid, method, params, None)
    return combos


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

def detect_events(combo: Combination, series):
    """Run one combination's detection; returns (events, resolved_threshold)."""
    m = combo.method
    p = combo.param_dict
    if combo.threshold is not None:
        rth = resolve_threshold(combo.threshold, series)
        if m is Method.WINDOW:
            return detect_windows(series, rth, p["window_len"]), rth
        if m is Method.CBT:
            return detect_cbt(series, rth), rth
        if m is Method.FMBT:
            return detect_fmbt(series, rth, p["intdur"], p.get("deficit_basis", "moving_average")), rth
        if m is Method.VMBT:
            return detect_vmbt(series, rth, p.get("intdur_start"), p.get("step", 1)), rth
        if m is Method.SPA:
            return detect_spa_drought(series, rth), rth
        raise ParameterError(f"method {m.value} needs no threshold")
    if m is Method.CAZ:
        return detect_caz(series), None
    if m is Method.FMAZ:
        return detect_fmaz(series, p["intdur"]), None
    if m is Method.VMAZ:
        return detect_vmaz(series, p.get("intdur_start"), p.get("step", 1)), None
    if m is Method.SPA_PRL:
        return detect_spa_prl(series, p.get("eff", 1.0), p.get("literal_eq8", False)), None
    raise ParameterError(f"method {m.value} requires a threshold")


def _run_one(combo: Combination, series, staging: Path) -> dict:
    events, rth = detect_events(combo, series)
    files = {
        "events": f"{combo.slug}.events.csv",
        "frequency_duration": f"{combo.slug}.freqdur.csv",
        "yearly_extremes": f"{combo.slug}.yearly.csv",
    }
    export_events(events, staging / files["events"], "csv", series_calendar=series)
    write_distribution_csv(frequency_duration_distribution(events), staging / files["frequency_duration"])
    write_yearly_csv(yearly_extremes(events, series), staging / files["yearly_extremes"])
    record = {
        "series": combo.series_id,
        "method": combo.method.value,
        "params": {k: v for k, v in combo.params},
        "threshold": (
            {"kind": "zero", "value": 0.0}
            if rth is None
            else {"kind": combo.threshold.kind, "param": combo.threshold.param, "value": rth.value}
        ),
        "event_count": len(events),
        "files": files,
    }
    return record


@dataclass(frozen=True)
class RunReport:
    output_dir: str
    manifest: dict
    combination_count: int


def run_config(cfg: RunConfig) -> RunReport:
    """Execute every combination and write artifacts plus manifest.json.

    Raises EngineError naming the first failed combination; in that case the
    staging area is removed and no output file is touched.
    """
    pool, fills = build_series_pool(cfg)
    combos = enumerate_combinations(cfg, pool)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=outdir))
    try:
        records: dict[str, dict] = {}
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool_ex:
            futures = {
                pool_ex.submit(_run_one, combo, pool[combo.series_id], staging): combo
                for combo in combos
            }
            done, not_done = wait(futures, return_when=FIRST_EXCEPTION)
            for fut in not_done:
                fut.cancel()
            order = {combo.slug: i for i, combo in enumerate(combos)}
            failures = []
            for fut in done:
                combo = futures[fut]
                err = fut.exception()
                if err is not None:
                    failures.append((order[combo.slug], combo, err))
                else:
                    records[combo.slug] = fut.result()
            failed = min(failures)[1:] if failures else None
        if failed is not None:
            combo, err = failed
            raise EngineError(
                f"combination {combo.slug} (series {combo.series_id!r}, method "
                f"{combo.method.value}) failed: {err}"
            ) from err

        manifest = {
            "step_hours": cfg.step_hours,
            "fills": [
                {"series": f.series_id, "gap_start": f.gap_start.isoformat(), "filled": f.filled}
                for f in fills
            ],
            "combinations": [records[c.slug] for c in combos],
        }
        with open(staging / "manifest.json", "w", encoding="utf-8") as handle:
            json.dump(manifest, handle, indent=2, sort_keys=True)
            handle.write("\n")

        for name in sorted(os.listdir(staging)):
            os.replace(staging / name, outdir / name)
        staging.rmdir()
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return RunReport(output_dir=str(outdir), manifest=manifest, combination_count=len(combos))
