"""Detection and characterization of renewable energy shortage events.

Shortage events come in two flavors: availability droughts (capacity factors
below a threshold) and positive residual load events (load exceeding supply).
Both are detected by a family of methods that differ in how they pool
neighboring shortfalls:

    WINDOW            fixed windows packed into below-threshold runs
    CBT  / CAZ        maximal strictly-qualifying runs
    FMBT / FMAZ       moving-average runs at a fixed averaging interval
    VMBT / VMAZ       variable averaging interval, longest window first
    SPA  / SPA_PRL    clamped cumulative deficit (sequent peak), with an
                      optional storage round-trip efficiency discount

Modules: series (time-series substrate), thresholds (qualification levels),
events (the event record), droughts / residual (detection), portfolio
(weighted mixes, residual load construction), reporting (distributions,
yearly extremes, export), io / config / engine / cli (batch front end).
"""

from .errors import (
    AlignmentError,
    EngineError,
    IngestError,
    ParameterError,
    SeriesLookupError,
    ShortfallError,
)
from .series import (
    AvailabilitySeries,
    DEFAULT_STEP,
    HOURS_PER_YEAR,
    MovingAverageSeries,
    ResidualLoadSeries,
    SeriesStats,
    TimeSeries,
    as_timeseries,
    moving_average,
    split_by_year,
    summary_stats,
)
from .thresholds import (
    THRESHOLD_KINDS,
    ZERO_LINE,
    ResolvedThreshold,
    ThresholdSpec,
    ZeroLine,
    resolve_threshold,
    threshold_sweep,
)
from .events import Method, ShortageEvent
from .droughts import (
    detect_cbt,
    detect_fmbt,
    detect_spa_drought,
    detect_vmbt,
    detect_windows,
)
from .residual import (
    StorageEfficiency,
    adjust_residual_load,
    detect_caz,
    detect_fmaz,
    detect_spa_prl,
    detect_vmaz,
)
from .portfolio import (
    CapacityMap,
    PortfolioEntry,
    PortfolioSpec,
    compose_weighted,
    residual_load_from_profiles,
)
from .reporting import (
    Calendar,
    EVENT_COLUMNS,
    FrequencyDurationDistribution,
    YearlyExtremes,
    export_events,
    frequency_duration_distribution,
    import_events,
    write_distribution_csv,
    write_yearly_csv,
    yearly_extremes,
)
from .io import ColumnMap, IngestResult, ingest_csv, wide_to_long, write_long_csv
from .config import MethodConfig, RunConfig, config_from_mapping, load_config
from .engine import build_series_pool, detect_events, enumerate_combinations, run_config

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "AvailabilitySeries",
    "Calendar",
    "CapacityMap",
    "ColumnMap",
    "DEFAULT_STEP",
    "EVENT_COLUMNS",
    "EngineError",
    "FrequencyDurationDistribution",
    "HOURS_PER_YEAR",
    "IngestError",
    "IngestResult",
    "Method",
    "MethodConfig",
    "MovingAverageSeries",
    "ParameterError",
    "PortfolioEntry",
    "PortfolioSpec",
    "ResidualLoadSeries",
    "ResolvedThreshold",
    "RunConfig",
    "SeriesLookupError",
    "SeriesStats",
    "ShortageEvent",
    "ShortfallError",
    "StorageEfficiency",
    "THRESHOLD_KINDS",
    "ThresholdSpec",
    "TimeSeries",
    "YearlyExtremes",
    "ZERO_LINE",
    "ZeroLine",
    "adjust_residual_load",
    "as_timeseries",
    "build_series_pool",
    "compose_weighted",
    "config_from_mapping",
    "detect_caz",
    "detect_cbt",
    "detect_events",
    "detect_fmaz",
    "detect_fmbt",
    "detect_spa_drought",
    "detect_spa_prl",
    "detect_vmaz",
    "detect_vmbt",
    "detect_windows",
    "enumerate_combinations",
    "export_events",
    "frequency_duration_distribution",
    "import_events",
    "ingest_csv",
    "load_config",
    "moving_average",
    "residual_load_from_profiles",
    "resolve_threshold",
    "run_config",
    "split_by_year",
    "summary_stats",
    "threshold_sweep",
    "wide_to_long",
    "write_distribution_csv",
    "write_long_csv",
    "write_yearly_csv",
    "yearly_extremes",
]
