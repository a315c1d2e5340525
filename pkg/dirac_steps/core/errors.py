"""
Exception hierarchy for dirac-steps
Every error also derives from the nearest builtin so callers can catch either
"""

from typing import Any, Dict, Optional


class DiracStepsError(Exception):
    """Base class for all library errors"""


class DomainError(DiracStepsError, ValueError):
    """Input outside the admissible domain of an operation"""


class BoundaryError(DomainError):
    """Parameter sits exactly on a singular region boundary"""


class RepresentationError(DiracStepsError, ValueError):
    """Spinor given in the wrong gamma-matrix representation"""


class ConvergenceError(DiracStepsError, ArithmeticError):
    """Series did not converge within its term budget"""

    def __init__(self, message: str, partial_value: complex, error_estimate: float, terms: int):
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate
        self.terms = terms


class DegenerateMatchingError(DiracStepsError, ArithmeticError):
    """Boundary-matching system is singular"""

    def __init__(self, message: str, determinant: complex, scale: float):
        super().__init__(message)
        self.determinant = determinant
        self.scale = scale


class IntegrationError(DiracStepsError, RuntimeError):
    """ODE integration failed"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ExtractionError(DiracStepsError, ArithmeticError):
    """Amplitude extraction system is ill-conditioned"""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition
