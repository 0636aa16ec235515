"""Exception types shared across the toolkit."""


class MatoolError(Exception):
    """Base class for all toolkit errors."""


class DomainError(MatoolError):
    """Input outside the mathematical domain of an operation."""


class ToleranceNotMet(MatoolError):
    """Quadrature or iteration failed to reach the requested tolerance.

    Carries the best available estimate so callers can decide whether to
    accept it anyway.
    """

    def __init__(self, message, best=None, error=None):
        super().__init__(message)
        self.best = best
        self.error = error


class StiffnessAbort(MatoolError):
    """ODE step size underflowed; a partial solution is attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateChart(MatoolError):
    """Legendre chart rejected: the second y-derivative vanishes at the base."""


class InversionFailure(MatoolError):
    """Newton inversion of a chart did not converge."""


class NoPlateauWindow(MatoolError):
    """No integer window lands the pulled-back rectangle on a cutoff plateau."""


class BoundViolation(MatoolError):
    """A certified bound (e.g. the weight sandwich) could not be fitted."""


class ScheduleOverflow(MatoolError):
    """No admissible schedule entry below the configured cap."""


class SignAnomaly(MatoolError):
    """An integral that must be positive came out nonpositive."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class StateError(MatoolError):
    """Operation invoked before a required prior step (e.g. no schedule)."""
