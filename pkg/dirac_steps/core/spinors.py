"""
Gamma matrices and spinors
Dirac-Pauli and Weyl bases, spin-up plane-wave spinors, and the Weyl/Dirac map
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from dirac_steps.core.config import settings
from dirac_steps.core.dispersion import FREE, PotentialPoint
from dirac_steps.core.errors import DomainError, RepresentationError


class Representation(str, Enum):
    DIRAC_PAULI = "dirac_pauli"
    WEYL = "weyl"


IDENTITY_2 = np.eye(2, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# (phi, theta) -> ((phi + theta), (phi - theta)) / sqrt(2); its own inverse
WEYL_TO_DIRAC_2 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
WEYL_TO_DIRAC_4 = np.kron(WEYL_TO_DIRAC_2, IDENTITY_2)


def gamma_matrices(representation: Representation = Representation.DIRAC_PAULI) -> Tuple[np.ndarray, ...]:
    """
    The four 4x4 gamma matrices (gamma^0, gamma^1, gamma^2, gamma^3)

    Dirac-Pauli: gamma^0 = diag(I, -I), gamma^i = [[0, s_i], [-s_i, 0]].
    Weyl: gamma^0 = [[0, I], [I, 0]], gamma^i = [[0, -s_i], [s_i, 0]], which
    reduces on the spin-up sector to the two-component system of the smooth step.
    """
    zero = np.zeros((2, 2), dtype=complex)
    if representation == Representation.DIRAC_PAULI:
        gamma0 = np.block([[IDENTITY_2, zero], [zero, -IDENTITY_2]])
        spatial = tuple(np.block([[zero, s], [-s, zero]]) for s in PAULI)
    else:
        gamma0 = np.block([[zero, IDENTITY_2], [IDENTITY_2, zero]])
        spatial = tuple(np.block([[zero, -s], [s, zero]]) for s in PAULI)
    return (gamma0,) + spatial


def clifford_residual(representation: Representation = Representation.DIRAC_PAULI) -> float:
    """max |{gamma^mu, gamma^nu} - 2 g^{mu nu} I|"""
    gammas = gamma_matrices(representation)
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            worst = max(worst, float(np.max(np.abs(anti - 2.0 * METRIC[mu, nu] * np.eye(4)))))
    return worst


@dataclass(frozen=True)
class DiracSpinorPlaneWave:
    """Spin-up plane wave (1, 0, ratio, 0) exp(-iEt + ipz) in the Dirac-Pauli basis"""
    third_component_ratio: complex
    energy: float
    momentum: complex
    representation: Representation = Representation.DIRAC_PAULI
    pot: PotentialPoint = FREE
    mass: float = 1.0

    def as_vector(self) -> np.ndarray:
        return np.array([1.0, 0.0, self.third_component_ratio, 0.0], dtype=complex)


def plane_wave_spinor(energy: float, momentum: complex, pot: PotentialPoint = FREE, mass: float = 1.0) -> DiracSpinorPlaneWave:
    """
    Build the spin-up plane-wave spinor of an on-shell state

    The third-component ratio (E - qV - m)/(p - qA) equals (p - qA)/(E - qV + m)
    on shell; the second form is used near p = qA where the first is 0/0.
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    kinetic_e = energy - pot.v
    kinetic_p = complex(momentum) - pot.a
    if abs(kinetic_p) < settings.small_momentum:
        if kinetic_e + mass == 0:
            raise DomainError("spinor undefined at E - qV = -m with p = qA")
        ratio = kinetic_p / (kinetic_e + mass)
    else:
        ratio = (kinetic_e - mass) / kinetic_p
    return DiracSpinorPlaneWave(complex(ratio), energy, complex(momentum), Representation.DIRAC_PAULI, pot, mass)


def dirac_residual(spinor: DiracSpinorPlaneWave) -> float:
    """max |(gamma^0 (E - qV) - gamma^3 (p - qA) - m) psi| of a plane-wave spinor, in the Dirac-Pauli basis"""
    gammas = gamma_matrices(Representation.DIRAC_PAULI)
    operator = (
        gammas[0] * (spinor.energy - spinor.pot.v)
        - gammas[3] * (spinor.momentum - spinor.pot.a)
        - spinor.mass * np.eye(4)
    )
    psi = spinor.as_vector()
    if spinor.representation == Representation.WEYL:
        psi = WEYL_TO_DIRAC_4 @ psi
    return float(np.max(np.abs(operator @ psi)))


def dirac_upper_factor(energy: float, kinetic_momentum: float, mass: float) -> float:
    """
    m + E - k for an on-shell wave of energy E = +-sqrt(k^2 + m^2)

    Up to 1/(sqrt(2) m) this is the Dirac-Pauli first component of the Weyl
    plane wave (1, (E - k)/m). Both branches avoid the cancellation near k = 0.
    """
    if energy > 0:
        return mass + mass * mass / (energy + kinetic_momentum) if kinetic_momentum > 0 else mass + energy - kinetic_momentum
    magnitude = -energy
    return -kinetic_momentum * (kinetic_momentum + mass + magnitude) / (mass + magnitude)


@dataclass(frozen=True)
class SpinorSample:
    """Spinor value at time t; two reduced components (phi, theta) or four"""
    time: float
    components: Tuple[complex, ...]
    representation: Representation = Representation.WEYL

    @property
    def phi(self) -> complex:
        return self.components[0]

    @property
    def theta(self) -> complex:
        return self.components[-1] if len(self.components) == 2 else self.components[2]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=complex)


def _transform(sample: SpinorSample, target: Representation) -> SpinorSample:
    size = len(sample.components)
    if size == 2:
        matrix = WEYL_TO_DIRAC_2
    elif size == 4:
        matrix = WEYL_TO_DIRAC_4
    else:
        raise DomainError(f"spinor must have 2 or 4 components, got {size}")
    values = matrix @ sample.as_array()
    return SpinorSample(sample.time, tuple(complex(v) for v in values), target)


def weyl_to_dirac(sample: SpinorSample) -> SpinorSample:
    """(phi^D, theta^D) = (phi + theta, phi - theta) / sqrt(2)"""
    if sample.representation != Representation.WEYL:
        raise RepresentationError(f"expected a Weyl spinor, got {sample.representation.value}")
    return _transform(sample, Representation.DIRAC_PAULI)


def dirac_to_weyl(sample: SpinorSample) -> SpinorSample:
    """Inverse of weyl_to_dirac (the map is an involution)"""
    if sample.representation != Representation.DIRAC_PAULI:
        raise RepresentationError(f"expected a Dirac-Pauli spinor, got {sample.representation.value}")
    return _transform(sample, Representation.WEYL)
