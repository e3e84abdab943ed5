"""Exception types shared across the package."""


class RpvolError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(RpvolError, ValueError):
    """A parameter is outside its documented domain."""


class InsufficientDataError(RpvolError):
    """Too few observations for the requested computation."""


class DegenerateSeriesError(RpvolError):
    """A constant series was supplied where variation is required."""


class DataQualityError(RpvolError):
    """Input data failed a quality rule (e.g. no retained trading days)."""


class MisalignedDaysError(RpvolError):
    """Two day-indexed series do not share the same day axis."""


class TickFormatError(RpvolError):
    """Tick or calendar file violates the documented format."""
