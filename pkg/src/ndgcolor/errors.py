class NdgError(Exception):
    """Base class for all library errors."""


class PreconditionError(NdgError, ValueError):
    """An input violates an operation's stated precondition."""


class InvariantBreach(NdgError, RuntimeError):
    """An internal consistency check failed; ``trace`` holds the recent history."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class BudgetExceeded(NdgError, RuntimeError):
    pass


class NoNondegenerateChange(NdgError, RuntimeError):
    """No regular non-degenerate swap exists for the given core."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class LemmaFailure(NdgError, RuntimeError):
    """The rainbow-neighbourhood solver gave up; ``report`` explains the last state."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}
