"""Shared exception types."""


class LclreError(Exception):
    """Base class for workbench errors."""


class ParseError(LclreError):
    """Problem-file syntax or consistency error."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class CapExceeded(LclreError):
    """A resource cap (label count, configuration count) was hit.

    `partial_index` reports how many full iterations completed before the
    cap triggered (meaningful for iterated operators).
    """

    def __init__(self, message, partial_index=None):
        self.partial_index = partial_index
        super().__init__(message)


class PremiseError(LclreError):
    """A precondition of a derived construction does not hold."""


class OperationCancelled(LclreError):
    """Raised inside long-running loops when the caller cancels a job."""
