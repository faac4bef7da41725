"""Exception hierarchy shared by every module of the kernel."""


class LogjetError(Exception):
    pass


class ShapeError(LogjetError, ValueError):
    """Operands have incompatible orders, lengths or matrix shapes."""


class DomainError(LogjetError, ArithmeticError):
    """An operation was applied outside the set where it is defined."""


class ChartDomainError(DomainError):
    """The point lies outside the requested affine chart."""


class ConfigurationError(LogjetError, ValueError):
    pass


class PrecisionError(LogjetError):
    """A truncated series cannot reach the requested tolerance."""


class ParseError(LogjetError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
