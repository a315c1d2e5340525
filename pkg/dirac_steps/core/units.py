"""
Natural-unit conventions and SI conversions
de Broglie periods, smooth-step time denormalization and the worked energy example
"""

import math
from typing import Optional

from dirac_steps.core.errors import DomainError
from dirac_steps.models.schemas import EnergyExampleReport, SIConstants

SI = SIConstants()

# Constants as quoted (4 significant digits) in the relativistic-regime example
EXAMPLE_CONSTANTS = SIConstants(
    electron_mass_kg=9.109e-31,
    elementary_charge_C=1.602e-19,
    speed_of_light_mps=2.998e8,
)

GRAPHENE_LATTICE_CONSTANT_M = 0.246e-9
GRAPHENE_FERMI_VELOCITY_MPS = 1.0e6


def de_broglie_period(total_energy_in_units_of_mc2: float, constants: SIConstants = SI) -> float:
    """
    de Broglie period T = h / E of an electron with E = kappa * m c^2

    Args:
        total_energy_in_units_of_mc2: kappa, total energy over rest energy
        constants: SI constants to use

    Returns:
        Period in seconds
    """
    kappa = total_energy_in_units_of_mc2
    if not kappa > 0:
        raise DomainError(f"energy ratio must be positive, got {kappa}")
    return constants.planck_Js / (kappa * constants.rest_energy_J)


def natural_de_broglie_period(energy: float) -> float:
    """de Broglie period 2 pi / E in natural units"""
    if not energy > 0:
        raise DomainError(f"energy must be positive, got {energy}")
    return 2.0 * math.pi / energy


def graphene_de_broglie_period(
    lattice_constant_m: float = GRAPHENE_LATTICE_CONSTANT_M,
    fermi_velocity_mps: float = GRAPHENE_FERMI_VELOCITY_MPS,
) -> float:
    """de Broglie period (3a/2) / v_F of a graphene Dirac electron, in seconds"""
    if lattice_constant_m <= 0 or fermi_velocity_mps <= 0:
        raise DomainError("lattice constant and Fermi velocity must be positive")
    return 1.5 * lattice_constant_m / fermi_velocity_mps


def denormalize_time(tau_natural: float, constants: SIConstants = SI) -> float:
    """Convert a natural-unit time constant to seconds: tau * hbar / (m c^2)"""
    if tau_natural < 0:
        raise DomainError(f"time constant must be non-negative, got {tau_natural}")
    return tau_natural * constants.hbar_Js / constants.rest_energy_J


def eta_to_tau(eta_seconds: float, constants: SIConstants = SI) -> float:
    """Convert a transition time in seconds to the natural-unit constant tau"""
    if eta_seconds < 0:
        raise DomainError(f"transition time must be non-negative, got {eta_seconds}")
    return eta_seconds * constants.rest_energy_J / constants.hbar_Js


def _round_sig(value: float, digits: int) -> float:
    return float(f"{value:.{digits - 1}e}")


def worked_energy_example(
    v_over_c: float = 0.01,
    potential_volts: float = 7.0,
    constants: SIConstants = EXAMPLE_CONSTANTS,
    quoted_digits: Optional[int] = 4,
) -> EnergyExampleReport:
    """
    Compare non-relativistic and relativistic total energies of an electron

    Quoted energies are rounded to `quoted_digits` significant digits and the
    two totals to one more digit, the way the example is printed. The quoted
    relative error is therefore dominated by that rounding; the exact relative
    error mc^2 (gamma - 1 - beta^2/2) / E_r is reported alongside.

    Args:
        v_over_c: Electron speed over the speed of light
        potential_volts: Potential energy step eV, in volts
        constants: SI constants (defaults to the example's 4-digit values)
        quoted_digits: Significant digits of the quoted energies, None for no rounding

    Returns:
        EnergyExampleReport
    """
    if not 0 <= v_over_c < 1:
        raise DomainError(f"v/c must lie in [0, 1), got {v_over_c}")

    def quote(value: float, extra: int = 0) -> float:
        return value if quoted_digits is None else _round_sig(value, quoted_digits + extra)

    m = constants.electron_mass_kg
    c = constants.speed_of_light_mps
    v = v_over_c * c
    rest = m * c * c
    kinetic = 0.5 * m * v * v
    potential = constants.elementary_charge_C * potential_volts

    gamma = 1.0 / math.sqrt(1.0 - v_over_c ** 2)
    momentum = gamma * m * v
    relativistic = math.sqrt(rest ** 2 + (momentum * c) ** 2) + potential

    rest_q, kinetic_q, potential_q = quote(rest), quote(kinetic), quote(potential)
    nonrel_total = quote(rest_q + kinetic_q + potential_q, extra=1)
    rel_total = quote(relativistic, extra=1)

    # gamma - 1 - beta^2/2 without cancellation
    beta2 = v_over_c ** 2
    excess = beta2 * beta2 * gamma ** 2 * (2.0 * gamma + 1.0) / (2.0 * (gamma + 1.0) ** 2)

    return EnergyExampleReport(
        v_over_c=v_over_c,
        potential_volts=potential_volts,
        rest_energy_J=rest_q,
        kinetic_energy_J=kinetic_q,
        potential_energy_J=potential_q,
        lorentz_factor=gamma,
        momentum_kgmps=momentum,
        energy_ratio=(kinetic_q + potential_q) / rest_q,
        nonrelativistic_total_J=nonrel_total,
        relativistic_total_J=rel_total,
        quoted_relative_error=abs(rel_total - nonrel_total) / rel_total,
        exact_relative_error=rest * excess / relativistic,
    )
