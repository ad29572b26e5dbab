"""Exception types raised across the package."""


class DivisionByZero(ZeroDivisionError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotUnitNorm(ValueError):
    """Raised when a unit-norm bound is requested for a non unit-norm family."""


class WrongCount(ValueError):
    pass


class InvalidArgs(ValueError):
    pass


class DomainError(ValueError):
    """A closed-form bound has a negative radicand for the given arguments."""


class DegenerateParameter(ValueError):
    pass


class CertificateError(ValueError):
    """A supplied diagonalization certificate does not verify."""


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"column {column}: {message} in {text!r}")
        self.text = text
        self.column = column
