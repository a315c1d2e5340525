"""
Non-relativistic limits of the sharp steps
Schrodinger scattering coefficients and the small-momentum expansions of Gamma_s and Gamma_t
"""

import math

from dirac_steps.core.errors import DomainError
from dirac_steps.models.schemas import Regime, ScatterOutcome


def gamma_spatial_nonrel(energy_nr: float, qv1: float, qv2: float) -> float:
    """Gamma_s ~ sqrt((E - qV2)/(E - qV1)) = k2/k1"""
    if energy_nr <= qv1 or energy_nr <= qv2:
        raise DomainError("both sides of the step must propagate")
    return math.sqrt((energy_nr - qv2) / (energy_nr - qv1))


def gamma_temporal_nonrel(k1: float, k2: float, mass: float = 1.0) -> float:
    """Second-order expansion of Gamma_t in the kinetic momenta k_j = p - qA_j"""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    x1, x2 = k1 / mass, k2 / mass
    return (0.5 * x2 * x2 + 1.0) / (0.5 * x1 * x2 + 1.0)


def scatter_nonrel_spatial(energy_nr: float, qv1: float, qv2: float, mass: float = 1.0) -> ScatterOutcome:
    """
    Schrodinger reflection and transmission at a potential step

    Args:
        energy_nr: Non-relativistic total energy (kinetic plus potential)
        qv1: Potential energy before the step
        qv2: Potential energy after the step
        mass: Particle mass

    Returns:
        ScatterOutcome with r = (k1 - k2)/(k1 + k2) and t = 2 k1/(k1 + k2)
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    if energy_nr <= qv1 or energy_nr <= qv2:
        # evanescent side, no non-relativistic Klein gap
        raise DomainError("both sides of the step must propagate")
    k1 = math.sqrt(2.0 * mass * (energy_nr - qv1))
    k2 = math.sqrt(2.0 * mass * (energy_nr - qv2))
    r = (k1 - k2) / (k1 + k2)
    t = 2.0 * k1 / (k1 + k2)
    return ScatterOutcome(
        amp_primary=complex(t),
        amp_secondary=complex(r),
        prob_primary=t * t * k2 / k1,
        prob_secondary=r * r,
        regime=Regime.PROPAGATING,
        gamma=complex(k2 / k1),
        energies={'incident': energy_nr, 'reflected': energy_nr, 'transmitted': energy_nr},
        momenta={'incident': complex(k1), 'reflected': complex(-k1), 'transmitted': complex(k2)},
    )


def scatter_nonrel_temporal() -> ScatterOutcome:
    """
    Schrodinger temporal step: f = 1, b = 0 for any step

    The first-order time derivative gives a single continuity condition, so
    back-scattering at a temporal step is a purely relativistic effect.
    """
    return ScatterOutcome(
        amp_primary=complex(1.0),
        amp_secondary=complex(0.0),
        prob_primary=1.0,
        prob_secondary=0.0,
        regime=Regime.NO_BACKSCATTER,
    )
