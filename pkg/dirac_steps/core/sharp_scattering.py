"""
Sharp-step scattering
Closed-form amplitudes and probabilities for V(z), V(t), A(z) and A(t) steps
"""

import logging
import math
from typing import Callable, Optional

from scipy.optimize import brentq

from dirac_steps.core.config import settings
from dirac_steps.core.dispersion import PotentialPoint, momentum_from_energy, scalar_temporal_transition, temporal_transition
from dirac_steps.core.errors import BoundaryError, DomainError
from dirac_steps.core.spinors import DiracSpinorPlaneWave
from dirac_steps.models.schemas import Regime, ScatterOutcome, StepConfig, StepKind

logger = logging.getLogger(__name__)

GAMMA_FORMS = ("energy", "momentum")


def _resolve_mass(mass: Optional[float]) -> float:
    m = settings.mass if mass is None else mass
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")
    return m


def _clamp(probability: float) -> float:
    """Zero out rounding noise below the clamp; real negatives pass through to validation"""
    if -settings.probability_clamp < probability < 0:
        return 0.0
    return probability


def dirac_current_z(spinor: DiracSpinorPlaneWave, amplitude: complex) -> float:
    """
    z-component of the Dirac current of a spin-up plane wave

    j^z = 2 |amp|^2 (E - qV - m)/(p - qA); for an evanescent wave the ratio is
    imaginary and only its real part carries current.

    Args:
        spinor: On-shell plane-wave spinor
        amplitude: Complex amplitude of the wave

    Returns:
        Current density j^z
    """
    kinetic_p = spinor.momentum - spinor.pot.a
    if kinetic_p == 0:
        raise ZeroDivisionError("current undefined at p = qA")
    ratio = (spinor.energy - spinor.pot.v - spinor.mass) / kinetic_p
    return 2.0 * abs(amplitude) ** 2 * complex(ratio).real


# V(z)

def gamma_spatial(energy: float, qv1: float, qv2: float, mass: Optional[float] = None) -> complex:
    """
    Gamma_s = (E - qV2 - m) p_i / ((E - qV1 - m) p_t)

    Real in the propagating and Klein regimes, purely imaginary in the gap.
    """
    m = _resolve_mass(mass)
    if not energy - qv1 > m:
        raise DomainError(f"incident wave does not propagate: E - qV1 = {energy - qv1} <= m = {m}")
    scale = max(1.0, abs(energy), abs(qv2))
    for edge in (m, -m):
        if abs(energy - qv2 - edge) <= settings.boundary_tol * scale:
            raise BoundaryError(f"qV2 = {qv2} sits on the gap edge E {'-' if edge > 0 else '+'} m")

    p_i = momentum_from_energy(energy, PotentialPoint(v=qv1), m).real
    branch = 1 if energy - qv2 > 0 else -1
    p_t = momentum_from_energy(energy, PotentialPoint(v=qv2), m, branch)
    return (energy - qv2 - m) * p_i / ((energy - qv1 - m) * p_t)


def scatter_scalar_spatial(energy: float, qv1: float, qv2: float, mass: Optional[float] = None) -> ScatterOutcome:
    """
    Reflection and transmission at a scalar-potential spatial step V(z)

    Regions: propagating (qV2 < E - m), Klein gap (E - m < qV2 < E + m) and
    Klein regime (qV2 > E + m, negative transmitted momentum). In the gap the
    amplitudes are reported but R = 1 and T = 0.

    Args:
        energy: Total energy E of the incident electron
        qv1: Coupled potential before the step
        qv2: Coupled potential after the step
        mass: Rest mass, defaults to settings.mass

    Returns:
        ScatterOutcome with (t, r) and (T, R)
    """
    m = _resolve_mass(mass)
    gamma = gamma_spatial(energy, qv1, qv2, m)
    r = (1.0 - gamma) / (1.0 + gamma)
    t = 2.0 / (1.0 + gamma)

    p_i = momentum_from_energy(energy, PotentialPoint(v=qv1), m).real
    branch = 1 if energy - qv2 > 0 else -1
    p_t = momentum_from_energy(energy, PotentialPoint(v=qv2), m, branch)

    if p_t.imag != 0:
        regime = Regime.KLEIN_GAP
        reflection, transmission = 1.0, 0.0
    else:
        regime = Regime.PROPAGATING if branch > 0 else Regime.KLEIN_REGIME
        reflection = _clamp(abs(r) ** 2)
        transmission = _clamp(abs(t) ** 2 * gamma.real)

    return ScatterOutcome(
        amp_primary=t,
        amp_secondary=r,
        prob_primary=transmission,
        prob_secondary=reflection,
        regime=regime,
        gamma=gamma,
        energies={'incident': energy, 'reflected': energy, 'transmitted': energy},
        momenta={'incident': complex(p_i), 'reflected': complex(-p_i), 'transmitted': p_t},
    )


def momentum_transition_coefficient(energy: float, qv1: float, qv2: float, mass: Optional[float] = None) -> float:
    """
    Transmission weight C_T from conservation with C_R = 1

    R = |r|^2 and T = |t|^2 C_T with R + T = 1 give C_T = (1 - |r|^2)/|t|^2,
    which reproduces Gamma_s outside the gap.
    """
    outcome = scatter_scalar_spatial(energy, qv1, qv2, mass)
    if outcome.regime == Regime.KLEIN_GAP:
        raise DomainError("no transmitted current inside the Klein gap")
    return (1.0 - abs(outcome.amp_secondary) ** 2) / abs(outcome.amp_primary) ** 2


# V(t)

def scatter_scalar_temporal(e_i: float, qv1: float, qv2: float, mass: Optional[float] = None) -> ScatterOutcome:
    """A scalar temporal step only shifts the energy: f = 1, b = 0"""
    m = _resolve_mass(mass)
    if e_i - qv1 < m:
        raise DomainError(f"incident kinetic energy {e_i - qv1} below rest mass {m}")
    e_f, e_b = scalar_temporal_transition(e_i, qv1, qv2)
    p = math.sqrt((e_i - qv1) ** 2 - m * m)
    return ScatterOutcome(
        amp_primary=complex(1.0),
        amp_secondary=complex(0.0),
        prob_primary=1.0,
        prob_secondary=0.0,
        regime=Regime.NO_BACKSCATTER,
        energies={'incident': e_i, 'forward': e_f, 'backward': e_b},
        momenta={'incident': complex(p), 'forward': complex(p), 'backward': complex(p)},
    )


# A(z)

def scatter_vector_spatial(energy: float, qa1: float, qa2: float, mass: Optional[float] = None) -> ScatterOutcome:
    """A vector spatial step only shifts the canonical momentum: r = 0, t = 1"""
    m = _resolve_mass(mass)
    if not energy > m:
        raise DomainError(f"energy {energy} must exceed rest mass {m}")
    kinetic = math.sqrt(energy * energy - m * m)
    return ScatterOutcome(
        amp_primary=complex(1.0),
        amp_secondary=complex(0.0),
        prob_primary=1.0,
        prob_secondary=0.0,
        regime=Regime.NO_BACKSCATTER,
        energies={'incident': energy, 'reflected': energy, 'transmitted': energy},
        momenta={
            'incident': complex(kinetic + qa1),
            'reflected': complex(-kinetic + qa1),
            'transmitted': complex(kinetic + qa2),
        },
    )


# A(t)

def _kinetic_momenta(e_i: float, qa1: float, qa2: float, m: float):
    if not e_i > m:
        raise DomainError(f"incident energy {e_i} must exceed rest mass {m}")
    k1 = math.sqrt(e_i * e_i - m * m)
    if k1 == 0:
        raise DomainError("zero incident kinetic momentum: Gamma_t singular")
    return k1, k1 - (qa2 - qa1)


def inverse_gamma_temporal(e_i: float, qa1: float, qa2: float, mass: Optional[float] = None, form: str = "energy") -> float:
    """
    1/Gamma_t, finite everywhere; zero at the forward-backward crossing

    "energy":   (k2 (E_i - m)/k1 + m) / E_f
    "momentum": (k2 (sqrt(k1^2 + m^2) - m)/k1 + m) / sqrt(k2^2 + m^2)
    with k_j = p - qA_j.
    """
    if form not in GAMMA_FORMS:
        raise DomainError(f"unknown Gamma_t form {form!r}, expected one of {GAMMA_FORMS}")
    m = _resolve_mass(mass)
    k1, k2 = _kinetic_momenta(e_i, qa1, qa2, m)
    if form == "energy":
        e_f, _ = temporal_transition(e_i, qa2 - qa1, m)
        return (k2 * (e_i - m) / k1 + m) / e_f
    # (sqrt(k1^2 + m^2) - m) = k1^2 / (sqrt(k1^2 + m^2) + m)
    return (k2 * k1 / (math.hypot(k1, m) + m) + m) / math.hypot(k2, m)


def gamma_temporal(e_i: float, qa1: float, qa2: float, mass: Optional[float] = None, form: str = "energy") -> float:
    """Gamma_t of a sharp vector-potential temporal step (inf at the crossing)"""
    g = inverse_gamma_temporal(e_i, qa1, qa2, mass, form)
    return math.inf if g == 0 else 1.0 / g


def scatter_vector_temporal(e_i: float, qa1: float, qa2: float, mass: Optional[float] = None) -> ScatterOutcome:
    """
    Later-forward and later-backward waves of a sharp vector-potential temporal step

    f = (1 + Gamma_t)/(2 Gamma_t), b = (Gamma_t - 1)/(2 Gamma_t) and
    F, B = |f|^2, |b|^2 times 2 Gamma_t^2/(1 + Gamma_t^2). Evaluated through
    g = 1/Gamma_t so the crossing Gamma_t = inf stays finite.

    Args:
        e_i: Incident energy
        qa1: Coupled vector potential before the step
        qa2: Coupled vector potential after the step
        mass: Rest mass, defaults to settings.mass

    Returns:
        ScatterOutcome with (f, b) and (F, B)
    """
    m = _resolve_mass(mass)
    k1, k2 = _kinetic_momenta(e_i, qa1, qa2, m)
    g = inverse_gamma_temporal(e_i, qa1, qa2, m)
    e_f, e_b = temporal_transition(e_i, qa2 - qa1, m)

    f = 0.5 * (1.0 + g)
    b = 0.5 * (1.0 - g)
    norm = 2.0 * (1.0 + g * g)
    forward = _clamp((1.0 + g) ** 2 / norm)
    backward = _clamp((1.0 - g) ** 2 / norm)
    logger.debug("A(t) step E_i=%g dA=%g: 1/Gamma_t=%.15g F=%.15g B=%.15g", e_i, qa2 - qa1, g, forward, backward)

    p = k1 + qa1
    return ScatterOutcome(
        amp_primary=complex(f),
        amp_secondary=complex(b),
        prob_primary=forward,
        prob_secondary=backward,
        regime=Regime.PROPAGATING,
        gamma=complex(math.inf) if g == 0 else complex(1.0 / g),
        energies={'incident': e_i, 'forward': e_f, 'backward': e_b},
        momenta={'incident': complex(p), 'forward': complex(p), 'backward': complex(p)},
    )


def energy_transition_coefficient(e_i: float, qa1: float, qa2: float, mass: Optional[float] = None) -> float:
    """C = 2 Gamma_t^2/(1 + Gamma_t^2) = 1/(f^2 + b^2)"""
    g = inverse_gamma_temporal(e_i, qa1, qa2, mass)
    return 2.0 / (1.0 + g * g)


def temporal_crossing_point(e_i: float, mass: Optional[float] = None, qa1: float = 0.0) -> float:
    """qA2 where F = B (Gamma_t infinite): qA1 + k1 E_i/(E_i - m)"""
    m = _resolve_mass(mass)
    k1, _ = _kinetic_momenta(e_i, qa1, qa1, m)
    return qa1 + k1 * e_i / (e_i - m)


# Dispatch

_SCATTERERS = {
    StepKind.SCALAR_SPATIAL: scatter_scalar_spatial,
    StepKind.SCALAR_TEMPORAL: scatter_scalar_temporal,
    StepKind.VECTOR_SPATIAL: scatter_vector_spatial,
    StepKind.VECTOR_TEMPORAL: scatter_vector_temporal,
}


def scatter(config: StepConfig, energy: float, mass: Optional[float] = None) -> ScatterOutcome:
    """Scatter an electron of the given energy off the configured sharp step"""
    return _SCATTERERS[config.kind](energy, config.before, config.after, mass)


def probability_crossing(
    kind: StepKind,
    energy: float,
    lo: float,
    hi: float,
    mass: Optional[float] = None,
    before: float = 0.0,
) -> float:
    """
    Step height at which the primary and secondary probabilities are equal

    Args:
        kind: SCALAR_SPATIAL (T = R) or VECTOR_TEMPORAL (F = B)
        energy: Incident energy
        lo: Lower end of the bracket for the after-step value
        hi: Upper end of the bracket
        mass: Rest mass
        before: Step value before the interface

    Returns:
        After-step value of the crossing
    """
    if kind not in (StepKind.SCALAR_SPATIAL, StepKind.VECTOR_TEMPORAL):
        raise DomainError(f"{kind.value} steps do not back-scatter, no crossing exists")
    scatterer: Callable[..., ScatterOutcome] = _SCATTERERS[kind]

    def balance(after: float) -> float:
        outcome = scatterer(energy, before, after, mass)
        return outcome.prob_primary - outcome.prob_secondary

    f_lo, f_hi = balance(lo), balance(hi)
    if f_lo * f_hi > 0:
        raise DomainError(f"no probability crossing bracketed by [{lo}, {hi}]")
    root = brentq(balance, lo, hi, xtol=1e-13)
    logger.debug("%s crossing at %.12g", kind.value, root)
    return root
