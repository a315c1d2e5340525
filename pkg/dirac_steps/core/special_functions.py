"""
Gauss hypergeometric function 2F1
Complex-parameter Maclaurin series with Pfaff mapping for Re(z) < 0
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from dirac_steps.core.config import settings
from dirac_steps.core.errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

POLE_TOL = 1e-10
MIN_TOL, MAX_TOL = 1e-16, 1e-6
SUSTAINED_TERMS = 3


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters of 2F1(a, b; c; z)"""
    a: complex
    b: complex
    c: complex
    z: complex

    def shifted(self) -> "Hyp2F1Params":
        """(a + 1, b + 1; c + 1; z), the parameters of the derivative"""
        return replace(self, a=self.a + 1, b=self.b + 1, c=self.c + 1)

    def convergence_margin(self) -> float:
        """Re(c - a - b); the series converges absolutely on |z| = 1 when positive"""
        return (complex(self.c) - self.a - self.b).real


def _check_pole(c: complex) -> None:
    c = complex(c)
    if abs(c.imag) <= POLE_TOL and c.real <= POLE_TOL and abs(c.real - round(c.real)) <= POLE_TOL:
        raise DomainError(f"c = {c} is a pole of 2F1 (non-positive integer)")


def _check_tol(tol: float) -> None:
    if not MIN_TOL <= tol <= MAX_TOL:
        raise DomainError(f"tolerance {tol} outside [{MIN_TOL}, {MAX_TOL}]")


def _series(a: complex, b: complex, c: complex, z: complex, tol: float, max_terms: int) -> Tuple[complex, int]:
    """
    Sum sum_n (a)_n (b)_n / ((c)_n n!) z^n by term recurrence

    Stops once |term| <= tol |sum| holds for SUSTAINED_TERMS consecutive terms
    while the term ratio is below one, or when the series terminates.
    """
    term = complex(1.0)
    total = complex(1.0)
    largest = 1.0
    quiet = 0
    for n in range(max_terms):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        term *= ratio
        total += term
        size = abs(term)
        largest = max(largest, size)
        if size == 0.0:
            return total, n + 1
        if size <= tol * abs(total) and abs(ratio) < 1.0:
            quiet += 1
            if quiet >= SUSTAINED_TERMS:
                if largest > settings.cancellation_warn_ratio * abs(total):
                    logger.warning(
                        "2F1 series cancellation: max term %.3g vs sum %.3g (a=%s b=%s c=%s z=%s)",
                        largest, abs(total), a, b, c, z,
                    )
                logger.debug("2F1 series converged after %d terms", n + 1)
                return total, n + 1
        else:
            quiet = 0
    raise ConvergenceError(
        f"2F1 series did not converge within {max_terms} terms (z={z})",
        partial_value=total,
        error_estimate=abs(term) / max(abs(total), 1e-300),
        terms=max_terms,
    )


def _pfaff(params: Hyp2F1Params) -> Tuple[complex, Hyp2F1Params]:
    """
    Pick the Pfaff variant with the faster-decaying coefficients

    2F1(a, b; c; z) = (1 - z)^-a 2F1(a, c - b; c; w)
                    = (1 - z)^-b 2F1(c - a, b; c; w),  w = z / (z - 1)
    """
    a, b, c, z = (complex(v) for v in (params.a, params.b, params.c, params.z))
    w = z / (z - 1.0)
    score_a = abs(a) * abs(c - b)
    score_b = abs(c - a) * abs(b)
    if score_b < score_a * (1.0 - 1e-12):
        return (1.0 - z) ** (-b), Hyp2F1Params(c - a, b, c, w)
    return (1.0 - z) ** (-a), Hyp2F1Params(a, c - b, c, w)


def hyp2f1(
    params: Hyp2F1Params,
    tol: Optional[float] = None,
    method: str = "auto",
    allow_continuation: bool = False,
) -> complex:
    """
    Evaluate 2F1(a, b; c; z)

    With method "auto", arguments with Re(z) < 0 are mapped by a Pfaff
    transformation to w = z/(z - 1), |w| <= 1/2 on the unit disc. "direct"
    always sums the raw Maclaurin series.

    Args:
        params: Parameters (a, b, c, z)
        tol: Relative tolerance in [1e-16, 1e-6], defaults to settings.hyp2f1_tol
        method: "auto" or "direct"
        allow_continuation: Accept |z| > 1 when the Pfaff image lies inside the unit disc

    Returns:
        Complex value of 2F1
    """
    tol = settings.hyp2f1_tol if tol is None else tol
    _check_tol(tol)
    _check_pole(params.c)
    if method not in ("auto", "direct"):
        raise DomainError(f"unknown method {method!r}")

    z = complex(params.z)
    if z == 0:
        return complex(1.0)
    if abs(z) > 1.0 and not allow_continuation:
        raise DomainError(f"|z| = {abs(z)} > 1 outside the series domain")

    max_terms = settings.hyp2f1_max_terms
    if method == "auto" and z.real < 0:
        prefactor, mapped = _pfaff(params)
        if abs(mapped.z) >= 1.0:
            raise DomainError(f"Pfaff image |w| = {abs(mapped.z)} not inside the unit disc")
        value, _ = _series(complex(mapped.a), complex(mapped.b), complex(mapped.c), mapped.z, tol, max_terms)
        return prefactor * value

    if abs(z) > 1.0:
        raise DomainError(f"|z| = {abs(z)} > 1 and no transformation applies")
    if abs(z) == 1.0 and params.convergence_margin() <= 0:
        raise DomainError("series diverges on |z| = 1 unless Re(c - a - b) > 0")
    value, _ = _series(complex(params.a), complex(params.b), complex(params.c), z, tol, max_terms)
    return value


def hyp2f1_derivative(
    params: Hyp2F1Params,
    tol: Optional[float] = None,
    allow_continuation: bool = False,
) -> complex:
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a + 1, b + 1; c + 1; z)"""
    _check_pole(params.c)
    a, b, c = complex(params.a), complex(params.b), complex(params.c)
    return a * b / c * hyp2f1(params.shifted(), tol, allow_continuation=allow_continuation)
