"""Exception types shared by the compute modules."""


class ValidationError(ValueError):
    """Malformed input: wrong lengths, non-finite values, orders out of range."""


class DomainError(ValueError):
    """Evaluation point outside the region where the quantity is defined."""


class UnsupportedError(ValueError):
    """Operation not available for this combination of inputs."""


class PoleError(ZeroDivisionError):
    """The Cayley map hit (or came within tolerance of) its pole at w = -1."""


class NumericError(ArithmeticError):
    """Quadrature failed to converge.

    The last estimate is kept on the exception so callers can still report it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
