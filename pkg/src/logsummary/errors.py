"""Exception types shared across the pipeline."""


class LogSummaryError(Exception):
    """Base class for all pipeline errors."""


class EmptyLog(LogSummaryError):
    """A log line produced no tokens."""


class EmptyInput(LogSummaryError):
    """An input corpus contained no logs."""


class ParseError(LogSummaryError):
    """A structured input file is malformed."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class DimensionError(LogSummaryError, ValueError):
    """Vectors of different dimension were combined."""


class DegenerateInput(LogSummaryError, ValueError):
    """A metric was asked for on an input where it is undefined."""


class ConfigError(LogSummaryError, ValueError):
    """A configuration value is out of bounds."""
