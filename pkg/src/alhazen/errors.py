"""Exception types raised by the solvers."""


class AlhazenError(ValueError):
    """Base class for solver errors; the message is shown by the CLI."""


class DegenerateInputError(AlhazenError):
    pass


class ConvergenceError(AlhazenError):
    """Root finder gave up; ``partial`` holds what it had."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DomainError(AlhazenError):
    pass


class NoTangencyError(AlhazenError):
    pass
