"""Exception types shared across the package."""


class ArgpError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ArgpError, ValueError):
    """A parameter or argument lies outside its valid domain."""


class EstimationError(ArgpError, RuntimeError):
    """An estimator could not produce a usable result.

    The optional ``diagnostics`` dict carries whatever partial results were
    available (best optimizer iterate, raw frequencies, grid counts).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CsvFormatError(ArgpError, ValueError):
    """An input file failed the strict CSV schema; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class InsufficientDataError(ArgpError, ValueError):
    """Not enough usable observations for the requested operation."""
