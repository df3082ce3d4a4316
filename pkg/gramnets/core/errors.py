"""
Exception hierarchy shared by every gramnets module.
"""
from typing import Any, Optional, Sequence


class GramError(Exception):
    """Base class for all errors raised by gramnets."""


class ShapeError(GramError, ValueError):
    """Operands of a primitive do not conform."""

    def __init__(self, primitive: str, *shapes: Sequence[int], detail: str = ""):
        self.primitive = primitive
        self.shapes = tuple(tuple(s) for s in shapes)
        shown = " vs ".join(str(s) for s in self.shapes)
        message = f"{primitive}: incompatible shapes {shown}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class SingularMatrixError(GramError, ArithmeticError):
    """Raised when a linear system cannot be solved reliably."""

    def __init__(self, message: str, condition: float):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class NonScalarRootError(GramError, ValueError):
    """backward() was asked to start from a non-scalar node."""


class NonFiniteError(GramError, FloatingPointError):
    """A gradient, parameter or probed loss value is NaN or infinite."""

    def __init__(self, message: str, name: Optional[str] = None):
        self.name = name
        super().__init__(message)


class NonFiniteLossError(GramError, FloatingPointError):
    """A training loss went non-finite; carries the partial trace for reporting."""

    def __init__(self, iteration: int, loss_name: str, trace: Any = None):
        self.iteration = iteration
        self.loss_name = loss_name
        self.trace = trace
        super().__init__(f"loss '{loss_name}' became non-finite at iteration {iteration}")


class IdxFormatError(GramError, ValueError):
    """Base class for malformed IDX files."""


class WrongMagicError(IdxFormatError):
    pass


class TruncatedPayloadError(IdxFormatError):
    pass


class CountMismatchError(IdxFormatError):
    pass


class ConfigError(GramError, ValueError):
    """Invalid experiment configuration; message names the line or the key path."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        super().__init__(message)


class NotPSDError(GramError, ValueError):
    """A covariance matrix has eigenvalues below the allowed tolerance."""


class RunNotFoundError(GramError, LookupError):
    """No run directory exists for the requested run id."""
