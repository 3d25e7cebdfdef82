"""Shortage event record shared by all detection methods."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError
from .thresholds import ResolvedThreshold, ZeroLine


class Method(str, Enum):
    """Identification method that produced an event."""

    WINDOW = "WINDOW"
    CBT = "CBT"          # constantly below threshold
    FMBT = "FMBT"        # fixed moving average below threshold
    VMBT = "VMBT"        # variable moving average below threshold
    SPA = "SPA"          # sequent peak algorithm on availability deficit
    CAZ = "CAZ"          # constantly above zero (residual load)
    FMAZ = "FMAZ"        # fixed moving average above zero
    VMAZ = "VMAZ"        # variable moving average above zero
    SPA_PRL = "SPA_PRL"  # sequent peak algorithm on residual load
    SPA_ADJ = "SPA_ADJ"  # SPA_PRL with storage round-trip efficiency < 1

    def __str__(self) -> str:  # so f-strings print CBT, not Method.CBT
        return self.value


SPA_FAMILY = frozenset({Method.SPA, Method.SPA_PRL, Method.SPA_ADJ})
INTDUR_METHODS = frozenset({Method.FMBT, Method.VMBT, Method.FMAZ, Method.VMAZ})
PRL_METHODS = frozenset(
    {Method.CAZ, Method.FMAZ, Method.VMAZ, Method.SPA_PRL, Method.SPA_ADJ}
)


@dataclass(frozen=True)
class ShortageEvent:
    """One detected shortage interval.

    start_index/end_index are inclusive positions in the analyzed series.
    For the moving-average methods (FMBT/FMAZ) they refer to positions of the
    moving average, i.e. window ends; `source_span` gives the underlying
    raw-sample span. For the SPA family the interval runs from the first
    positive cumulative deficit to the last attainment of the event maximum;
    `recovery` counts the samples from there until the deficit returns to
    zero, and is absent when the series ends first (truncated=True).

    energy_deficit is threshold-relative availability * samples for drought
    methods and energy units for residual-load methods. For VMBT/VMAZ it is
    informational only (`deficit_is_informational`).
    """

    method: Method
    start_index: int
    end_index: int
    duration: int
    energy_deficit: float
    threshold: ResolvedThreshold | ZeroLine
    intdur: int | None = None
    recovery: int | None = None
    truncated: bool = False

    def __post_init__(self) -> None:
        if self.start_index < 0 or self.end_index < self.start_index:
            raise ParameterError(
                f"bad event interval [{self.start_index}, {self.end_index}]"
            )
        if self.duration != self.end_index - self.start_index + 1:
            raise ParameterError(
                f"duration {self.duration} inconsistent with interval "
                f"[{self.start_index}, {self.end_index}]"
            )
        if self.energy_deficit < 0.0:
            raise ParameterError(f"negative energy deficit {self.energy_deficit}")
        if (self.intdur is not None) != (self.method in INTDUR_METHODS):
            raise ParameterError(f"intdur must be set exactly for {sorted(m.value for m in INTDUR_METHODS)}")
        if self.method not in SPA_FAMILY:
            if self.recovery is not None or self.truncated:
                raise ParameterError("recovery/truncated apply to the SPA family only")
        elif self.truncated == (self.recovery is not None):
            raise ParameterError("an SPA event has a recovery exactly when not truncated")

    @property
    def source_span(self) -> tuple[int, int]:
        """Raw-sample span underlying the event (differs from the index span
        only for the moving-average methods, whose indices are window ends)."""
        if self.method in (Method.FMBT, Method.FMAZ):
            return (self.start_index - self.intdur + 1, self.end_index)
        return (self.start_index, self.end_index)

    @property
    def deficit_is_informational(self) -> bool:
        """True for variable-window methods, whose deficit over the accepted
        window is reported for completeness but is near zero by construction."""
        return self.method in (Method.VMBT, Method.VMAZ)
