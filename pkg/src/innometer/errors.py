"""Exception types shared across the package."""


class InnometerError(Exception):
    """Base class for every error this package raises on purpose."""


class PatternError(InnometerError):
    """A search pattern is malformed: bad syntax, duplicates, or bounds."""


class ConfigError(InnometerError):
    """A configuration value is invalid or an option is unknown."""


class UnsupportedKindError(ConfigError):
    """The source cannot measure the requested kind of signal."""


class SourceError(InnometerError):
    """An evidence source failed or returned something unusable."""

    def __init__(self, message: str, engine_id: str = "", query_index: int | None = None):
        super().__init__(message)
        self.engine_id = engine_id
        self.query_index = query_index


class UnusablePatternError(SourceError):
    """The marker-only query returned no documents, so counts cannot be scaled."""


class EvidenceError(InnometerError):
    """Mass assignments cannot be built or combined as requested."""


class TotalConflictError(EvidenceError):
    """Two assignments disagree completely (K = 1); combination is undefined."""


class UndefinedStatisticError(InnometerError):
    """A statistic is undefined for the given data, e.g. correlation of a constant."""
