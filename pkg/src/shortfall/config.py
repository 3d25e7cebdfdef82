"""Declarative run configuration (YAML) for batch analyses.

A run config names input files, derived series (portfolios, residual loads),
and the analyses to sweep. Schema, with optional keys bracketed:

    step_hours: 1.0                     # [default 1.0]
    inputs:
      - path: availability.csv
        role: availability              # availability | load | residual_load
        [columns]: {timestamp: time}    # remap long-format column names
        [max_fill_gap]: 0
    [portfolios]:
      - name: wind_mix
        entries:
          - {technology: onshore, region: DE, weight: 0.75}
    [residual_loads]:
      - name: de_rl
        load: load                      # id of an ingested load series
        capacities: {onshore@DE: 120.0}
    [droughts]:
      - series: [onshore@DE, wind_mix]
        thresholds:
          - {kind: absolute, param: 0.1}
          - {kind: mean_fraction, sweep: [0.1, 0.5, 0.9]}
        methods:
          - {name: CBT}
          - {name: WINDOW, window_len: 24}
          - {name: FMBT, intdur: [5, 10]}
          - {name: VMBT, intdur_start: 1000, step: 24}
          - {name: SPA}
    [prl]:
      - series: [de_rl]
        methods:
          - {name: CAZ}
          - {name: FMAZ, intdur: 3}
          - {name: VMAZ, intdur_start: 100}
          - {name: SPA_PRL, eff: [1.0, 0.5], literal_eq8: false}
    output_dir: out
    [parallelism]: 1

Threshold entries give either a single param or a sweep list; method entries
may give list-valued intdur/eff, and every list is expanded into independent
analysis combinations. Unknown keys anywhere are rejected. Relative paths are
resolved against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path

import yaml

from .errors import ParameterError
from .events import Method, PRL_METHODS
from .io import ColumnMap
from .portfolio import PortfolioEntry, PortfolioSpec
from .thresholds import ThresholdSpec

DROUGHT_METHODS = frozenset(
    {Method.WINDOW, Method.CBT, Method.FMBT, Method.VMBT, Method.SPA}
)

# Parameter keys each method accepts in a config; list-valued entries marked *
# are expanded into one combination per value.
_METHOD_PARAMS = {
    Method.WINDOW: {"window_len"},
    Method.CBT: set(),
    Method.FMBT: {"intdur", "deficit_basis"},  # intdur*
    Method.VMBT: {"intdur_start", "step"},
    Method.SPA: set(),
    Method.CAZ: set(),
    Method.FMAZ: {"intdur"},  # intdur*
    Method.VMAZ: {"intdur_start", "step"},
    Method.SPA_PRL: {"eff", "literal_eq8"},  # eff*
}
_EXPANDABLE = {"intdur", "eff"}


def _require_mapping(obj, context: str) -> dict:
    if not isinstance(obj, dict):
        raise ParameterError(f"{context}: expected a mapping, got {type(obj).__name__}")
    return obj


def _check_keys(mapping: dict, context: str, required=(), optional=()) -> None:
    unknown = set(mapping) - set(required) - set(optional)
    if unknown:
        raise ParameterError(f"{context}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in mapping]
    if missing:
        raise ParameterError(f"{context}: missing required keys {missing}")


def _as_list(obj, context: str) -> list:
    if not isinstance(obj, list):
        raise ParameterError(f"{context}: expected a list, got {type(obj).__name__}")
    return obj


def _positive_int(v, context: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ParameterError(f"{context}: expected a positive integer, got {v!r}")
    return v


@dataclass(frozen=True)
class InputSpec:
    path: str
    role: str
    columns: ColumnMap
    max_fill_gap: int


@dataclass(frozen=True)
class PortfolioConfig:
    name: str
    spec: PortfolioSpec


@dataclass(frozen=True)
class ResidualConfig:
    name: str
    load: str
    capacities: tuple  # ((technology, region), capacity) pairs


@dataclass(frozen=True)
class MethodConfig:
    """One method entry; expand() flattens list-valued parameters."""

    method: Method
    params: tuple  # (key, value) pairs, config order

    def expand(self) -> list[tuple[Method, dict]]:
        combos = [{}]
        for key, value in self.params:
            if key in _EXPANDABLE and isinstance(value, list):
                combos = [dict(c, **{key: v}) for c in combos for v in value]
            else:
                combos = [dict(c, **{key: value}) for c in combos]
        return [(self.method, c) for c in combos]


@dataclass(frozen=True)
class AnalysisConfig:
    series: tuple
    thresholds: tuple  # ThresholdSpec, empty for PRL analyses
    methods: tuple  # MethodConfig


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple
    output_dir: str
    droughts: tuple = ()
    prl: tuple = ()
    portfolios: tuple = ()
    residual_loads: tuple = ()
    step_hours: float = 1.0
    parallelism: int = 1

    @property
    def step(self) -> timedelta:
        return timedelta(hours=self.step_hours)


def _parse_input(entry, i: int, base: Path) -> InputSpec:
    ctx = f"inputs[{i}]"
    entry = _require_mapping(entry, ctx)
    _check_keys(entry, ctx, required=("path", "role"), optional=("columns", "max_fill_gap"))
    role = entry["role"]
    if role not in ("availability", "load", "residual_load"):
        raise ParameterError(f"{ctx}: unknown role {role!r}")
    gap = entry.get("max_fill_gap", 0)
    if isinstance(gap, bool) or not isinstance(gap, int) or gap < 0:
        raise ParameterError(f"{ctx}: max_fill_gap must be a non-negative integer, got {gap!r}")
    return InputSpec(
        path=str(base / str(entry["path"])),
        role=role,
        columns=ColumnMap.from_mapping(entry.get("columns")),
        max_fill_gap=gap,
    )


def _parse_portfolio(entry, i: int) -> PortfolioConfig:
    ctx = f"portfolios[{i}]"
    entry = _require_mapping(entry, ctx)
    _check_keys(entry, ctx, required=("name", "entries"))
    entries = []
    for j, e in enumerate(_as_list(entry["entries"], f"{ctx}.entries")):
        ectx = f"{ctx}.entries[{j}]"
        e = _require_mapping(e, ectx)
        _check_keys(e, ectx, required=("technology", "region", "weight"))
        entries.append(
            PortfolioEntry(
                technology=str(e["technology"]),
                region=str(e["region"]),
                weight=float(e["weight"]),
            )
        )
    return PortfolioConfig(name=str(entry["name"]), spec=PortfolioSpec(tuple(entries)))


def _parse_residual(entry, i: int) -> ResidualConfig:
    ctx = f"residual_loads[{i}]"
    entry = _require_mapping(entry, ctx)
    _check_keys(entry, ctx, required=("name", "load", "capacities"))
    caps = _require_mapping(entry["capacities"], f"{ctx}.capacities")
    pairs = []
    for key, cap in caps.items():
        tech, sep, region = str(key).partition("@")
        if not sep or not tech or not region:
            raise ParameterError(
                f"{ctx}.capacities: key {key!r} must have the form technology@region"
            )
        pairs.append(((tech, region), float(cap)))
    return ResidualConfig(name=str(entry["name"]), load=str(entry["load"]), capacities=tuple(pairs))


def _parse_threshold(entry, ctx: str) -> list[ThresholdSpec]:
    entry = _require_mapping(entry, ctx)
    _check_keys(entry, ctx, required=("kind",), optional=("param", "sweep"))
    kind = str(entry["kind"])
    if ("param" in entry) == ("sweep" in entry):
        raise ParameterError(f"{ctx}: give exactly one of param or sweep")
    if "param" in entry:
        params = [entry["param"]]
    else:
        params = _as_list(entry["sweep"], f"{ctx}.sweep")
        if not params:
            raise ParameterError(f"{ctx}.sweep: empty sweep")
    return [ThresholdSpec(kind, float(p)) for p in params]


def _parse_method(entry, ctx: str, allowed) -> MethodConfig:
    entry = _require_mapping(entry, ctx)
    if "name" not in entry:
        raise ParameterError(f"{ctx}: missing method name")
    name = str(entry["name"])
    try:
        method = Method(name)
    except ValueError:
        raise ParameterError(f"{ctx}: unknown method {name!r}") from None
    if method not in allowed:
        raise ParameterError(
            f"{ctx}: method {name} does not apply here "
            f"(expected one of {sorted(m.value for m in allowed)})"
        )
    if method is Method.SPA_ADJ:
        raise ParameterError(
            f"{ctx}: SPA_ADJ is the tag SPA_PRL events carry when eff < 1; "
            "configure SPA_PRL with an eff parameter instead"
        )
    permitted = _METHOD_PARAMS[method]
    _check_keys(entry, ctx, required=("name",), optional=tuple(permitted))
    params = []
    for key in (k for k in entry if k != "name"):
        value = entry[key]
        if key in _EXPANDABLE and isinstance(value, list):
            if not value:
                raise ParameterError(f"{ctx}.{key}: empty list")
            values = value
        else:
            values = [value]
        for v in values:
            if key in ("intdur", "window_len", "intdur_start", "step"):
                _positive_int(v, f"{ctx}.{key}")
            elif key == "eff":
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0.0 < float(v) <= 1.0:
                    raise ParameterError(f"{ctx}.eff: expected a value in (0, 1], got {v!r}")
            elif key == "literal_eq8":
                if not isinstance(v, bool):
                    raise ParameterError(f"{ctx}.literal_eq8: expected a boolean, got {v!r}")
            elif key == "deficit_basis":
                if v not in ("moving_average", "original"):
                    raise ParameterError(
                        f"{ctx}.deficit_basis: expected moving_average or original, got {v!r}"
                    )
        params.append((key, value))
    if method in (Method.FMBT, Method.FMAZ) and "intdur" not in entry:
        raise ParameterError(f"{ctx}: {name} requires intdur")
    if method is Method.WINDOW and "window_len" not in entry:
        raise ParameterError(f"{ctx}: WINDOW requires window_len")
    return MethodConfig(method=method, params=tuple(params))


def _parse_analysis(entry, i: int, kind: str) -> AnalysisConfig:
    ctx = f"{kind}[{i}]"
    entry = _require_mapping(entry, ctx)
    if kind == "droughts":
        _check_keys(entry, ctx, required=("series", "thresholds", "methods"))
        allowed = DROUGHT_METHODS
        thresholds = []
        for j, t in enumerate(_as_list(entry["thresholds"], f"{ctx}.thresholds")):
            thresholds.extend(_parse_threshold(t, f"{ctx}.thresholds[{j}]"))
        if not thresholds:
            raise ParameterError(f"{ctx}.thresholds: at least one threshold required")
    else:
        _check_keys(entry, ctx, required=("series", "methods"))
        allowed = PRL_METHODS
        thresholds = []
    series = [str(s) for s in _as_list(entry["series"], f"{ctx}.series")]
    if not series:
        raise ParameterError(f"{ctx}.series: at least one series required")
    methods = [
        _parse_method(m, f"{ctx}.methods[{j}]", allowed)
        for j, m in enumerate(_as_list(entry["methods"], f"{ctx}.methods"))
    ]
    if not methods:
        raise ParameterError(f"{ctx}.methods: at least one method required")
    return AnalysisConfig(series=tuple(series), thresholds=tuple(thresholds), methods=tuple(methods))


def config_from_mapping(data, base_dir=".") -> RunConfig:
    """Build a validated RunConfig from an already-parsed mapping."""
    base = Path(base_dir)
    data = _require_mapping(data, "config")
    _check_keys(
        data,
        "config",
        required=("inputs", "output_dir"),
        optional=("step_hours", "parallelism", "portfolios", "residual_loads", "droughts", "prl"),
    )
    step_hours = float(data.get("step_hours", 1.0))
    if step_hours <= 0.0:
        raise ParameterError(f"step_hours must be positive, got {step_hours}")
    parallelism = data.get("parallelism", 1)
    _positive_int(parallelism, "parallelism")
    inputs = [
        _parse_input(e, i, base) for i, e in enumerate(_as_list(data["inputs"], "inputs"))
    ]
    if not inputs:
        raise ParameterError("inputs: at least one input file required")
    portfolios = [
        _parse_portfolio(e, i) for i, e in enumerate(_as_list(data.get("portfolios", []), "portfolios"))
    ]
    residuals = [
        _parse_residual(e, i)
        for i, e in enumerate(_as_list(data.get("residual_loads", []), "residual_loads"))
    ]
    droughts = [
        _parse_analysis(e, i, "droughts")
        for i, e in enumerate(_as_list(data.get("droughts", []), "droughts"))
    ]
    prl = [
        _parse_analysis(e, i, "prl") for i, e in enumerate(_as_list(data.get("prl", []), "prl"))
    ]
    if not droughts and not prl:
        raise ParameterError("config runs nothing: give at least one droughts or prl analysis")
    return RunConfig(
        inputs=tuple(inputs),
        output_dir=str(base / str(data["output_dir"])),
        droughts=tuple(droughts),
        prl=tuple(prl),
        portfolios=tuple(portfolios),
        residual_loads=tuple(residuals),
        step_hours=step_hours,
        parallelism=int(parallelism),
    )


def load_config(path) -> RunConfig:
    """Parse and validate a YAML run config; paths resolve against its directory."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as err:
        raise ParameterError(f"cannot read config {p}: {err}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ParameterError(f"config {p} is not valid YAML: {err}") from None
    return config_from_mapping(data, base_dir=p.parent)
