"""Exception hierarchy shared by the library and the command line front end."""


class FourierCurError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InvalidArgumentError(FourierCurError, ValueError):
    exit_code = 2


class NumericDomainError(FourierCurError, ArithmeticError):
    """A function produced a non-finite value at a quadrature or grid node."""

    exit_code = 3

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NumericFailureError(FourierCurError, ArithmeticError):
    exit_code = 3


class CapacityError(FourierCurError):
    """A requested computation exceeds its configured size budget."""

    exit_code = 4


class ExperimentIOError(FourierCurError, OSError):
    exit_code = 5

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path
