"""Exception types raised by the package."""


class InvalidArgumentError(ValueError):
    pass


class InfeasiblePowerError(ValueError):
    """SNR is too low for the requested support edge: SNR*delta <= delta**-t."""


class NoValidBoundError(ArithmeticError):
    """The negative-moment polynomial construction has no feasible parameters."""


class UndefinedPhaseError(ArithmeticError):
    pass


class NumericFailureError(ArithmeticError):
    """A quadrature did not reach its tolerance.

    The offending argument is kept on ``value``.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value
