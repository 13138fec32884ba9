"""Exception hierarchy shared across the pipeline.

The CLI maps these classes onto exit codes: ParameterError -> 1,
DataError -> 2, NumericalError -> 3.
"""


class EconRankError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(EconRankError):
    """An argument, option, or configuration value is invalid."""


class DataError(EconRankError):
    """Input data violates a structural requirement."""


class DuplicateObservationError(DataError):
    """Two rows map to the same (country, year, indicator) triple."""


class EmptyPanelError(DataError):
    """No country has complete coverage of the requested year range."""


class MissingObservationError(DataError):
    """Lookup of a (country, year) cell that does not exist."""


class AlignmentError(DataError):
    """Two per-country inputs cover different country sets."""


class NumericalError(EconRankError):
    """A computation is mathematically undefined for the given inputs."""


class DomainError(NumericalError):
    """Input lies outside the mathematical domain (e.g. log of a nonpositive value)."""


class DegenerateSampleError(NumericalError):
    """The sample carries no usable variation (all-zero deltas, zero variance)."""


class SingularDesignError(NumericalError):
    """A regression coordinate never varies, so the fit is undefined."""
