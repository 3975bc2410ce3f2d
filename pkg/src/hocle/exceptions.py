"""Exception hierarchy for hocle.

Data-loading problems derive from :class:`DataError` so the CLI can map them
to a single exit status; everything else derives from :class:`HocleError`.
"""


class HocleError(Exception):
    """Base class for all hocle errors."""


class DataError(HocleError):
    """Input data could not be read or is malformed."""


class RaggedRows(DataError):
    pass


class NonNumeric(DataError):
    pass


class Empty(DataError):
    pass


class LengthMismatch(DataError):
    pass


class BadClusterCount(HocleError):
    pass


class LabelOutOfRange(HocleError):
    pass


class SizeMismatch(HocleError):
    pass


class DimensionMismatch(SizeMismatch):
    pass


class NotSquare(HocleError):
    pass


class BadCount(HocleError):
    pass


class EmptyFamily(HocleError):
    pass


class EmptyInput(HocleError):
    pass


class ConfigError(HocleError):
    """Invalid run configuration (bad flag value, unreadable config file)."""
