"""
Shared fixtures for the dirac-steps test suite
"""

import math

import pytest

from dirac_steps.models.schemas import SmoothStepConfig

SQRT3 = math.sqrt(3.0)


def raw_series_sum(a: complex, b: complex, c: complex, z: complex, terms: int = 100_000) -> complex:
    """
    Plain Maclaurin sum of 2F1 with no transformation

    Returns the mean of the last two partial sums, which cancels the leading
    oscillation of an alternating series at z = -1.
    """
    term = complex(1.0)
    total = complex(1.0)
    previous = total
    for n in range(terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        previous = total
        total += term
    return 0.5 * (total + previous)


@pytest.fixture
def raw_series():
    return raw_series_sum


@pytest.fixture
def unit_step():
    """E/m = 2 electron, qA: 0 -> 1, tau = 0.1"""
    return SmoothStepConfig(qa1=0.0, qa2=1.0, tau=0.1, momentum=SQRT3, mass=1.0)


@pytest.fixture
def null_step():
    return SmoothStepConfig(qa1=0.4, qa2=0.4, tau=0.3, momentum=SQRT3 + 0.4, mass=1.0)
