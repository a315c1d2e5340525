"""
Electromagnetic step analogs
Fresnel-type amplitudes of spatial and temporal index steps in nonmagnetic media
"""

import math

from dirac_steps.core.errors import DomainError
from dirac_steps.models.schemas import IndexContrast, Regime, ScatterOutcome


def em_scatter_spatial(contrast: IndexContrast) -> ScatterOutcome:
    """r = (1 - N)/(1 + N), t = 2/(1 + N); R = r^2, T = N t^2"""
    n = contrast.contrast
    r = (1.0 - n) / (1.0 + n)
    t = 2.0 / (1.0 + n)
    return ScatterOutcome(
        amp_primary=complex(t),
        amp_secondary=complex(r),
        prob_primary=t * t * n,
        prob_secondary=r * r,
        regime=Regime.PROPAGATING,
        gamma=complex(n),
    )


def em_scatter_temporal(contrast: IndexContrast) -> ScatterOutcome:
    """
    Forward and backward waves after a temporal index step

    f = (1 + N)/(2N), b = (N - 1)/(2N). The Poynting ratios F = f^2/N and
    B = b^2/N do not sum to one: a temporal interface exchanges energy with
    whatever drives it, so the outcome is flagged as not a probability.
    """
    n = contrast.contrast
    f = (1.0 + n) / (2.0 * n)
    b = (n - 1.0) / (2.0 * n)
    return ScatterOutcome(
        amp_primary=complex(f),
        amp_secondary=complex(b),
        prob_primary=f * f / n,
        prob_secondary=b * b / n,
        regime=Regime.PROPAGATING,
        gamma=complex(n),
        is_probability=False,
    )


def quantum_em_formal_map(gamma_t: float) -> IndexContrast:
    """Index contrast N = Gamma_t whose temporal EM amplitudes equal the quantum ones"""
    if not (gamma_t > 0 and math.isfinite(gamma_t)):
        raise DomainError(f"Gamma_t must be positive and finite, got {gamma_t}")
    return IndexContrast.from_contrast(gamma_t)
