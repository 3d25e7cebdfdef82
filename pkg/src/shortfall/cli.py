"""Command-line front end.

Subcommands:

    ingest-check   validate a long-format CSV and print per-series summaries
    droughts       detect availability droughts in one series, emit events CSV
    prl            detect positive-residual-load events, emit events CSV
    portfolio      compose a weighted availability mix, emit long-format CSV
    report         frequency-duration and yearly-extremes tables from events
    run            execute a full YAML run config
    wide-to-long   convert a wide CSV (one column per series) to long format

Exit codes: 0 success, 1 input error (flags, files, parameters, config),
2 runtime failure while executing.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from datetime import datetime, timedelta, timezone
from pathlib import Path

from . import __version__
from .config import load_config
from .engine import Combination, detect_events, run_config
from .errors import (
    AlignmentError,
    EngineError,
    IngestError,
    ParameterError,
    SeriesLookupError,
    ShortfallError,
)
from .events import Method
from .io import ColumnMap, ingest_csv, wide_to_long, write_long_csv
from .portfolio import PortfolioEntry, PortfolioSpec, compose_weighted
from .reporting import (
    Calendar,
    YearlyExtremes,
    export_events,
    frequency_duration_distribution,
    import_events,
    write_distribution_csv,
    write_yearly_csv,
    yearly_extremes,
)
from .series import summary_stats
from .thresholds import ThresholdSpec

DROUGHT_CHOICES = ("WINDOW", "CBT", "FMBT", "VMBT", "SPA")
PRL_CHOICES = ("CAZ", "FMAZ", "VMAZ", "SPA_PRL")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; here those are input errors (1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_csv_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--step-hours", type=float, default=1.0, help="sample spacing in hours (default 1)")
    p.add_argument("--max-fill-gap", type=int, default=0, help="forward-fill gaps up to this many samples")
    p.add_argument("--timestamp-col", default="timestamp")
    p.add_argument("--value-col", default="value")
    p.add_argument("--technology-col", default="technology")
    p.add_argument("--region-col", default="region")


def _columns(args) -> ColumnMap:
    return ColumnMap(
        timestamp=args.timestamp_col,
        value=args.value_col,
        technology=args.technology_col,
        region=args.region_col,
    )


def _ingest(args, role: str):
    return ingest_csv(
        args.input,
        _columns(args),
        role=role,
        step=timedelta(hours=args.step_hours),
        max_fill_gap=args.max_fill_gap,
    )


def _pick_series(result, wanted):
    if wanted is None:
        return result.only()
    try:
        return result.series[wanted]
    except KeyError:
        raise SeriesLookupError(
            f"no series {wanted!r} in file; available: {sorted(result.series)}"
        ) from None


def _threshold_flag(text: str) -> ThresholdSpec:
    kind, sep, param = text.partition("=")
    if not sep:
        raise ParameterError(f"--threshold must look like kind=value, got {text!r}")
    try:
        value = float(param)
    except ValueError:
        raise ParameterError(f"--threshold value {param!r} is not a number") from None
    return ThresholdSpec(kind.strip(), value)


def _gathered_params(args, keys) -> dict:
    params = {}
    for flag, key in keys.items():
        v = getattr(args, flag)
        if v is not None and v is not False:
            params[key] = v
    return params


def _detect_and_export(args, method: Method, series, threshold) -> int:
    if method is Method.FMBT and args.intdur is None:
        raise ParameterError("FMBT requires --intdur")
    if method is Method.FMAZ and getattr(args, "intdur", None) is None:
        raise ParameterError("FMAZ requires --intdur")
    if method is Method.WINDOW and args.window_len is None:
        raise ParameterError("WINDOW requires --window-len")
    keys = {
        "intdur": "intdur",
        "window_len": "window_len",
        "intdur_start": "intdur_start",
        "scan_step": "step",
    }
    if hasattr(args, "deficit_basis"):
        keys["deficit_basis"] = "deficit_basis"
    if hasattr(args, "eff"):
        keys["eff"] = "eff"
        keys["literal_eq8"] = "literal_eq8"
    params = _gathered_params(args, keys)
    combo = Combination(
        series_id=getattr(series, "id", ""),
        method=method,
        params=tuple(sorted(params.items())),
        threshold=threshold,
        slug="cli",
    )
    events, rth = detect_events(combo, series)
    destination = args.out if args.out else sys.stdout
    export_events(events, destination, args.format, series_calendar=series)
    tag = f" at {rth.value:.6g}" if rth is not None else ""
    print(f"{method.value}{tag}: {len(events)} events", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_ingest_check(args) -> int:
    result = _ingest(args, args.role)
    for sid in sorted(result.series):
        obj = result.series[sid]
        ts = obj if not hasattr(obj, "series") else obj.series
        stats = summary_stats(ts)
        print(
            f"{sid}: {len(ts)} samples, {ts.start_time.isoformat()} .. {ts.end_time.isoformat()}, "
            f"mean {stats.mean:.6g}, min {ts.values.min():.6g}, max {ts.values.max():.6g}"
        )
    for fill in result.fills:
        print(f"filled {fill.filled} missing samples of {fill.series_id} from {fill.gap_start.isoformat()}")
    print(f"ok: {len(result.series)} series")
    return 0


def _cmd_droughts(args) -> int:
    method = Method(args.method)
    result = _ingest(args, "availability")
    series = _pick_series(result, args.series)
    return _detect_and_export(args, method, series, args.threshold)


def _cmd_prl(args) -> int:
    method = Method(args.method)
    result = _ingest(args, "residual_load")
    series = _pick_series(result, args.series)
    return _detect_and_export(args, method, series, None)


def _cmd_portfolio(args) -> int:
    result = _ingest(args, "availability")
    entries = []
    for text in args.entry:
        key, sep, w = text.partition("=")
        tech, sep2, region = key.partition("@")
        if not sep or not sep2 or not tech or not region:
            raise ParameterError(
                f"--entry must look like technology@region=weight, got {text!r}"
            )
        try:
            weight = float(w)
        except ValueError:
            raise ParameterError(f"--entry weight {w!r} is not a number") from None
        entries.append(PortfolioEntry(technology=tech, region=region, weight=weight))
    by_key = {(a.technology, a.region): a for a in result.series.values()}
    composite = compose_weighted(by_key, PortfolioSpec(tuple(entries)))
    destination = args.out if args.out else sys.stdout
    write_long_csv(destination, {composite.id: composite})
    print(f"composed {composite.id} from {len(entries)} entries", file=sys.stderr)
    return 0


def _event_start_times(path: Path, fmt: str) -> list[datetime]:
    text = path.read_text(encoding="utf-8")
    if fmt == "csv":
        rows = list(csv.DictReader(text.splitlines()))
        if rows and "start_time" not in rows[0]:
            raise ParameterError(f"{path} has no start_time column; is it an events CSV?")
        stamps = [r["start_time"] for r in rows]
    else:
        stamps = [r["start_time"] for r in json.loads(text)]
    return [datetime.fromisoformat(s) for s in stamps]


def _cmd_report(args) -> int:
    if not args.freqdur and not args.yearly:
        raise ParameterError("nothing to do: give --freqdur and/or --yearly output paths")
    path = Path(args.events)
    if not path.exists():
        raise IngestError(f"no such events file: {path}")
    step = timedelta(hours=args.step_hours)
    starts = _event_start_times(path, args.format)
    years = sorted({t.year for t in starts})
    start_year, end_year = args.start_year, args.end_year
    if starts:
        start_year = start_year if start_year is not None else years[0]
        end_year = end_year if end_year is not None else years[-1]
        if start_year > years[0]:
            raise ParameterError(
                f"events start in {years[0]}, before --start-year {start_year}"
            )
        if end_year < years[-1]:
            raise ParameterError(f"events start in {years[-1]}, after --end-year {end_year}")
    elif (start_year is None) != (end_year is None):
        raise ParameterError("an empty events file needs both --start-year and --end-year (or neither)")
    if start_year is not None and end_year is not None and end_year < start_year:
        raise ParameterError(f"--end-year {end_year} precedes --start-year {start_year}")

    anchor = (
        datetime(start_year, 1, 1, tzinfo=timezone.utc) if start_year is not None else None
    )
    if starts:
        events = import_events(path, args.format, start_time=anchor, step=step)
    else:
        events = []

    if args.freqdur:
        write_distribution_csv(frequency_duration_distribution(events), args.freqdur)
    if args.yearly:
        if start_year is None:
            extremes = YearlyExtremes(rows=())
        else:
            length = (datetime(end_year + 1, 1, 1, tzinfo=timezone.utc) - anchor) // step
            cal = Calendar(start_time=anchor, step=step, length=int(length))
            extremes = yearly_extremes(events, cal)
        write_yearly_csv(extremes, args.yearly)
    print(f"{len(events)} events summarized", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output_dir is not None:
        cfg = replace(cfg, output_dir=str(Path(args.output_dir)))
    if args.parallelism is not None:
        if args.parallelism < 1:
            raise ParameterError(f"--parallelism must be >= 1, got {args.parallelism}")
        cfg = replace(cfg, parallelism=args.parallelism)
    report = run_config(cfg)
    print(f"{report.combination_count} combinations -> {report.output_dir}/manifest.json")
    return 0


def _cmd_wide_to_long(args) -> int:
    n = wide_to_long(args.input, args.output, timestamp_column=args.timestamp_col)
    print(f"wrote {n} rows to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shortfall", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest-check", help="validate a long-format CSV")
    p.add_argument("input")
    p.add_argument("--role", choices=("availability", "load", "residual_load"), default="availability")
    _add_csv_flags(p)
    p.set_defaults(handler=_cmd_ingest_check)

    p = sub.add_parser("droughts", help="detect availability droughts in one series")
    p.add_argument("input")
    p.add_argument("--method", type=str.upper, choices=DROUGHT_CHOICES, required=True)
    p.add_argument("--threshold", type=_threshold_flag, required=True,
                   help="threshold as kind=value, e.g. absolute=0.1 or mean_fraction=0.5")
    p.add_argument("--series", help="series id tech@region (default: the only series in the file)")
    p.add_argument("--intdur", type=int, help="averaging interval in samples (FMBT)")
    p.add_argument("--deficit-basis", choices=("moving_average", "original"), default=None,
                   help="FMBT deficit accounting basis")
    p.add_argument("--window-len", type=int, help="window length in samples (WINDOW)")
    p.add_argument("--intdur-start", type=int, help="longest scanned window (VMBT; default: series length)")
    p.add_argument("--scan-step", type=int, help="decrement of the scanned window length (VMBT)")
    p.add_argument("--out", help="events file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_csv_flags(p)
    p.set_defaults(handler=_cmd_droughts)

    p = sub.add_parser("prl", help="detect positive residual load events")
    p.add_argument("input")
    p.add_argument("--method", type=str.upper, choices=PRL_CHOICES, required=True)
    p.add_argument("--series", help="series id (default: the only series in the file)")
    p.add_argument("--intdur", type=int, help="averaging interval in samples (FMAZ)")
    p.add_argument("--intdur-start", type=int, help="longest scanned window (VMAZ; default: series length)")
    p.add_argument("--scan-step", type=int, help="decrement of the scanned window length (VMAZ)")
    p.add_argument("--eff", type=float, help="storage round-trip efficiency in (0, 1] (SPA_PRL)")
    p.add_argument("--literal-eq8", action="store_true",
                   help="divide surpluses by eff instead of multiplying")
    p.add_argument("--window-len", type=int, help=argparse.SUPPRESS, default=None)
    p.add_argument("--out", help="events file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_csv_flags(p)
    p.set_defaults(handler=_cmd_prl)

    p = sub.add_parser("portfolio", help="compose a weighted availability mix")
    p.add_argument("input")
    p.add_argument("--entry", action="append", required=True,
                   help="technology@region=weight, repeatable")
    p.add_argument("--out", help="long-format CSV output (default: stdout)")
    _add_csv_flags(p)
    p.set_defaults(handler=_cmd_portfolio)

    p = sub.add_parser("report", help="summary tables from an events file")
    p.add_argument("events")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--freqdur", help="write the frequency-duration distribution here")
    p.add_argument("--yearly", help="write yearly extremes here")
    p.add_argument("--step-hours", type=float, default=1.0,
                   help="sample spacing of the analyzed series (default 1)")
    p.add_argument("--start-year", type=int, help="first year of the yearly table")
    p.add_argument("--end-year", type=int, help="last year of the yearly table")
    p.set_defaults(handler=_cmd_report)

    p = sub.add_parser("run", help="execute a YAML run config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", help="override the config's output directory")
    p.add_argument("--parallelism", type=int, help="override the config's work pool size")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("wide-to-long", help="convert a wide CSV to the long input format")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--timestamp-col", default="timestamp")
    p.set_defaults(handler=_cmd_wide_to_long)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParameterError, IngestError, AlignmentError, SeriesLookupError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except EngineError as err:
        print(f"run failed: {err}", file=sys.stderr)
        return 2
    except ShortfallError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # surface anything unexpected as a runtime failure
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
