"""Exception types shared across the package."""


class ShortfallError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ShortfallError, ValueError):
    """A parameter or configuration value violates a documented precondition."""


class AlignmentError(ShortfallError, ValueError):
    """Two series disagree on start time, step, or length."""


class SeriesLookupError(ShortfallError, KeyError):
    """A requested (technology, region) series is not in the series set."""


class IngestError(ShortfallError, ValueError):
    """Input data was rejected during ingestion.

    The message carries file/line context where available.
    """


class EngineError(ShortfallError, RuntimeError):
    """A batch run failed; the message names the failing combination."""
