"""
Dirac dispersion relation under minimal coupling
Energy/momentum transition maps and phase/group velocities
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple

from dirac_steps.core.errors import DomainError
from dirac_steps.models.schemas import NaturalUnits

logger = logging.getLogger(__name__)

ON_SHELL_TOL = 1e-10


@dataclass(frozen=True)
class PotentialPoint:
    """
    Four-potential at a point, already coupled to the charge

    v is q*V (scalar, A0) and a is q*A (z-component, A3).
    """
    v: float = 0.0
    a: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.v) and math.isfinite(self.a)):
            raise DomainError("potential values must be finite")

    @classmethod
    def from_potentials(cls, scalar: float, vector: float, units: NaturalUnits = NaturalUnits()) -> "PotentialPoint":
        """Couple raw potentials V and A to the electron charge q = -e"""
        return cls(v=units.charge * scalar, a=units.charge * vector)


FREE = PotentialPoint()


@dataclass(frozen=True)
class KinematicState:
    """Energy E and canonical momentum p of a plane wave"""
    energy: float
    momentum: float

    @classmethod
    def on_shell(cls, momentum: float, pot: PotentialPoint = FREE, mass: float = 1.0, branch: int = 1) -> "KinematicState":
        return cls(energy_from_momentum(momentum, pot, mass, branch), momentum)

    def shell_residual(self, pot: PotentialPoint = FREE, mass: float = 1.0) -> float:
        """(E - qV)^2 - (p - qA)^2 - m^2"""
        return (self.energy - pot.v) ** 2 - (self.momentum - pot.a) ** 2 - mass ** 2

    def is_on_shell(self, pot: PotentialPoint = FREE, mass: float = 1.0) -> bool:
        return abs(self.shell_residual(pot, mass)) <= ON_SHELL_TOL * max(1.0, self.energy ** 2)


def _check_branch(branch: int) -> None:
    if branch not in (1, -1):
        raise DomainError(f"branch must be +1 or -1, got {branch}")


def _check_mass(mass: float) -> None:
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")


def energy_from_momentum(p: float, pot: PotentialPoint, mass: float, branch: int = 1) -> float:
    """E = qV +- sqrt((p - qA)^2 + m^2)"""
    _check_mass(mass)
    _check_branch(branch)
    return pot.v + branch * math.hypot(p - pot.a, mass)


def momentum_from_energy(energy: float, pot: PotentialPoint, mass: float, branch: int = 1) -> complex:
    """
    Canonical momentum p = qA +- sqrt((E - qV)^2 - m^2)

    Inside the gap |E - qV| < m the result is evanescent: qA + i*kappa with
    kappa > 0 regardless of branch. A non-zero imaginary part is the
    evanescence flag.

    Args:
        energy: Total energy E
        pot: Coupled potential (qV, qA)
        mass: Rest mass m
        branch: +1 or -1, sign of the propagating root

    Returns:
        Complex momentum
    """
    _check_mass(mass)
    _check_branch(branch)
    kinetic = energy - pot.v
    radicand = kinetic * kinetic - mass * mass
    if radicand >= 0:
        return complex(pot.a + branch * math.sqrt(radicand), 0.0)
    return complex(pot.a, math.sqrt(-radicand))


def temporal_transition(e_i: float, q_da: float, mass: float) -> Tuple[float, float]:
    """
    Energies after a sharp vector-potential temporal step

    The canonical momentum p is conserved, so the kinetic momentum drops by
    q*dA and E_f = sqrt((sqrt(E_i^2 - m^2) - q dA)^2 + m^2), E_b = -E_f.
    """
    _check_mass(mass)
    if e_i < mass:
        raise DomainError(f"incident energy {e_i} below rest mass {mass}")
    kinetic = math.sqrt(e_i * e_i - mass * mass)
    e_f = math.hypot(kinetic - q_da, mass)
    return e_f, -e_f


def scalar_temporal_transition(e_i: float, qv1: float, qv2: float) -> Tuple[float, float]:
    """Energies after a scalar temporal step: rigid shift E_f = E_i + q dV, E_b = -E_f + 2 qV2"""
    e_f = e_i + (qv2 - qv1)
    return e_f, -e_f + 2.0 * qv2


def phase_velocity(state: KinematicState) -> float:
    """v_p = E / p"""
    if state.momentum == 0:
        raise ZeroDivisionError("phase velocity undefined at p = 0")
    return state.energy / state.momentum


def group_velocity(state: KinematicState, pot: PotentialPoint = FREE, mass: float = 1.0) -> float:
    """v_g = (p - qA) / (E - qV)"""
    kinetic = state.energy - pot.v
    if kinetic == 0:
        raise ZeroDivisionError("group velocity undefined at E = qV")
    if not state.is_on_shell(pot, mass):
        logger.debug("group velocity of off-shell state %s", state)
    return (state.momentum - pot.a) / kinetic


def temporal_velocity_report(e_i: float, qa1: float, qa2: float, mass: float) -> Dict[str, Dict[str, float]]:
    """
    Phase and group velocities around a sharp A(t) step

    Returns:
        {'incident'|'forward'|'backward': {'phase': v_p, 'group': v_g}}
    """
    _check_mass(mass)
    if e_i < mass:
        raise DomainError(f"incident energy {e_i} below rest mass {mass}")
    p = math.sqrt(e_i * e_i - mass * mass) + qa1
    e_f, e_b = temporal_transition(e_i, qa2 - qa1, mass)
    before, after = PotentialPoint(a=qa1), PotentialPoint(a=qa2)

    report = {}
    for name, energy, pot in (("incident", e_i, before), ("forward", e_f, after), ("backward", e_b, after)):
        state = KinematicState(energy, p)
        report[name] = {
            'phase': phase_velocity(state) if p != 0 else math.inf,
            'group': group_velocity(state, pot, mass),
        }
    return report


def spatial_velocity_report(energy: float, qv1: float, qv2: float, mass: float) -> Dict[str, Dict[str, float]]:
    """
    Phase and group velocities around a sharp V(z) step

    In the Klein gap the transmitted wave is evanescent: v_g = 0, v_p = inf.
    Beyond it (qV2 > E + m) the transmitted momentum takes the negative root.
    """
    _check_mass(mass)
    if energy - qv1 <= mass:
        raise DomainError("incident wave must propagate")
    before, after = PotentialPoint(v=qv1), PotentialPoint(v=qv2)
    p_i = momentum_from_energy(energy, before, mass).real
    report = {
        'incident': {'phase': energy / p_i, 'group': group_velocity(KinematicState(energy, p_i), before, mass)},
        'reflected': {'phase': -energy / p_i, 'group': group_velocity(KinematicState(energy, -p_i), before, mass)},
    }
    branch = 1 if energy - qv2 > 0 else -1
    p_t = momentum_from_energy(energy, after, mass, branch)
    if p_t.imag != 0:
        report['transmitted'] = {'phase': math.inf, 'group': 0.0}
    else:
        state = KinematicState(energy, p_t.real)
        report['transmitted'] = {
            'phase': phase_velocity(state) if p_t.real != 0 else math.inf,
            'group': group_velocity(state, after, mass),
        }
    return report
