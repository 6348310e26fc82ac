"""Exception types shared across the package."""


class QonsagerError(Exception):
    pass


class DivisionByZero(QonsagerError, ZeroDivisionError):
    pass


class DenominatorOutOfDomain(QonsagerError):
    """A quotient would put a non-q variable into a denominator."""


class UnboundVariable(QonsagerError, KeyError):
    pass


class PoleAtPoint(QonsagerError, ZeroDivisionError):
    pass


class ParseError(QonsagerError, ValueError):
    pass


class AlphabetMismatch(QonsagerError, ValueError):
    pass


class ZeroDeformation(QonsagerError, ValueError):
    pass


class UnassignedLetter(QonsagerError, KeyError):
    pass


class NegativeSpinParameter(QonsagerError, ValueError):
    pass


class NonInvertibleSpectralParameter(QonsagerError, ValueError):
    pass


class PresentationMismatch(QonsagerError, ValueError):
    pass


class InvalidModule(QonsagerError, ValueError):
    """Raised when a candidate module violates a defining relation."""


class CarrierMismatch(QonsagerError, TypeError):
    pass


class MissingIndex(QonsagerError, KeyError):
    pass


class ResourceBudgetExceeded(QonsagerError, RuntimeError):
    pass


class ConfigError(QonsagerError, ValueError):
    pass
