"""Exception types raised by biasdyn."""


class BiasdynError(Exception):
    """Base class for all library errors."""


class ValidationError(BiasdynError, ValueError):
    """An argument violates a documented precondition."""


class GridMismatchError(ValidationError):
    """Two series that must share a time grid do not."""


class DivergenceError(BiasdynError, ArithmeticError):
    """A simulation produced a non-finite state.

    Attributes
    ----------
    step : int
        Index of the first sample whose value is not finite.
    """

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class InsufficientDataError(ValidationError):
    """Too few usable samples for an estimate."""


class SpecSyntaxError(ValidationError):
    """A textual model, bias or input spec does not follow its grammar."""

    def __init__(self, token, message):
        self.token = token
        super().__init__(message)
