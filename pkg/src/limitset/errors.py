"""Exception types shared by every module of the engine."""


class LimitSetError(Exception):
    """Base class for all engine errors."""


class DomainError(LimitSetError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class RangeError(LimitSetError, IndexError):
    """A configuration was queried outside its declared validity range."""


class ResourceError(LimitSetError, RuntimeError):
    """An enumeration or computation exceeded its configured budget."""


class FormatError(LimitSetError, ValueError):
    """A text file could not be parsed.

    The message always carries the source name and the 1-based line number
    so that the CLI can print it unchanged.
    """

    def __init__(self, message, source="<string>", line=None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
