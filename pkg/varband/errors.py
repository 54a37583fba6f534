"""
Errors
======

Exception hierarchy shared by the library and the command line.

Each exception carries the process exit code the CLI reports for it:
1 for invalid input, 2 for numerical failure and 3 for a failed
verification.
"""

from typing import Any, Dict, Optional


class VarBandError(Exception):
    """Base class for all varband errors."""

    exit_code: int = 2

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class ValidationError(VarBandError):
    """Invalid profile, spectrum, point set or option."""

    exit_code = 1

    def __init__(self, message: str, field: Optional[str] = None, **details: Any) -> None:
        super().__init__(message, field=field, **details)
        self.field = field

    def __str__(self) -> str:
        if self.field:
            return f"{self.field}: {self.message}"
        return self.message


class DomainError(VarBandError, ValueError):
    """Argument outside the domain of an operation (u <= 0, lambda <= 0, duplicates)."""

    exit_code = 1


class ProfileIndexError(VarBandError, IndexError):
    """Transfer matrix or interval index out of range."""

    exit_code = 1


class NumericalError(VarBandError):
    """A computation failed to reach its tolerance."""

    exit_code = 2


class QuadratureError(NumericalError):
    """Adaptive quadrature exhausted its panel budget."""

    def __init__(self, message: str, achieved: float, panels: int) -> None:
        super().__init__(message, achieved=achieved, panels=panels)
        self.achieved = achieved
        self.panels = panels


class SeriesDivergenceError(NumericalError):
    """The J series ratio |R| is not below one."""


class KappaMismatchError(NumericalError):
    """Two independent constructions of kappa disagree."""


class KernelAssemblyError(NumericalError):
    """Assembled kernel value has an unexpected imaginary part."""


class RankDeficiencyError(NumericalError):
    """Gram matrix has no spectrum left after thresholding."""


class VerificationError(VarBandError):
    """One or more verification checks failed."""

    exit_code = 3

    def __init__(self, message: str, failed: Optional[list] = None) -> None:
        super().__init__(message, failed=failed or [])
        self.failed = failed or []
