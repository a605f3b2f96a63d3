"""Exception and warning types.

Every exception carries a short machine-readable ``code`` that the CLI prints
as ``code: message`` on standard error.
"""


class MockqError(Exception):
    code = "error"


class DomainError(MockqError, ValueError):
    code = "domain"


class DegenerateStateError(DomainError):
    code = "degenerate_state"


class MultiplierOverflowError(DomainError):
    code = "multiplier_overflow"


class TruncationError(DomainError):
    code = "truncation"


class ConvergenceError(MockqError, RuntimeError):
    code = "convergence"


class BlowUpError(MockqError, RuntimeError):
    code = "blow_up"

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DegenerateFitError(DomainError):
    code = "degenerate_fit"


class ExtrapolationError(DomainError):
    code = "extrapolation"


class WindowError(DomainError):
    code = "window"


class InsufficientDataError(DomainError):
    code = "insufficient_data"


class IONotFoundError(MockqError, FileNotFoundError):
    code = "io_not_found"


class UsageError(MockqError):
    code = "usage"


class MockqWarning(UserWarning):
    pass


class NonUnitaryWarning(MockqWarning):
    pass


class SlowConvergenceWarning(MockqWarning):
    pass


class ReliabilityWarning(MockqWarning):
    pass


class SaturationWarning(MockqWarning):
    pass
