"""Exception types shared by the fracdiff modules."""


class FracdiffError(Exception):
    """Base class for all library errors."""


class DomainError(FracdiffError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConfigError(FracdiffError, ValueError):
    """An experiment or discretization configuration is invalid.

    The message names the offending key or parameter.
    """


class AccuracyError(FracdiffError, ArithmeticError):
    """A numerical procedure could not reach its accuracy target.

    ``partial`` holds the best available estimate, when one exists.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InstabilityError(FracdiffError, ArithmeticError):
    """Time integration diverged.  ``step`` is the step index that tripped
    the divergence guard."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step
