"""Exception hierarchy shared by the library and the CLI."""


class PEAError(Exception):
    """Base class for all errors raised by :mod:`pea`."""


class DimensionError(PEAError, ValueError):
    """Array shapes do not agree."""


class InvalidParameterError(PEAError, ValueError):
    """A parameter is outside its admissible range."""


class DataError(PEAError, ValueError):
    """Input data is malformed (ragged, non-finite, degenerate, ...)."""


class ModelFormatError(PEAError, ValueError):
    """A persisted model file cannot be read back."""
