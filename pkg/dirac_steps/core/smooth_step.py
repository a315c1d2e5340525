"""
Smooth temporal vector-potential step
Exact hypergeometric solution of the tanh step: profiles, exponents, matching and probabilities
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from scipy.integrate import quad

from dirac_steps.core.config import settings
from dirac_steps.core.errors import DegenerateMatchingError, DomainError
from dirac_steps.core.special_functions import Hyp2F1Params, hyp2f1, hyp2f1_derivative
from dirac_steps.core.spinors import Representation, SpinorSample, dirac_to_weyl, dirac_upper_factor, weyl_to_dirac
from dirac_steps.models.schemas import Regime, ScatterOutcome, SmoothStepConfig

logger = logging.getLogger(__name__)

__all__ = [
    "Side",
    "HypergeomExponents",
    "MatchingBlocks",
    "potential_at",
    "field_at",
    "field_impulse",
    "exponents",
    "matching_blocks",
    "coefficient_ratios",
    "naive_coefficient_ratios",
    "smooth_scatter",
    "later_modes_at",
    "wavefunction_at",
    "asymptotic_earlier",
    "weyl_to_dirac",
    "dirac_to_weyl",
]

# exp() overflows past ~709.78
MAX_EXPONENT = 700.0
IMAGINARY_TOL = 1e-14


class Side(str, Enum):
    EARLIER = "earlier"
    LATER = "later"


# Profiles

def potential_at(config: SmoothStepConfig, t: float) -> float:
    """qA(t) = qA1 + (q dA / 2)(1 + tanh((t - t0)/tau))"""
    return config.qa1 + 0.5 * config.delta * (1.0 + math.tanh((t - config.t0) / config.tau))


def field_at(config: SmoothStepConfig, t: float) -> float:
    """Electric pulse qE_z(t) = -dqA/dt = -(q dA / (2 tau)) sech^2((t - t0)/tau)"""
    x = (t - config.t0) / config.tau
    # cosh(x)**2 overflows past |x| ~ 355
    if abs(x) > 350.0:
        return 0.0
    return -0.5 * config.delta / config.tau / math.cosh(x) ** 2


def field_impulse(config: SmoothStepConfig, half_width: float = 20.0) -> float:
    """
    Integral of the field pulse over [t0 - half_width tau, t0 + half_width tau]

    Converges to -q dA, the total change of the vector potential.
    """
    lo = config.t0 - half_width * config.tau
    hi = config.t0 + half_width * config.tau
    value, _ = quad(lambda t: field_at(config, t), lo, hi, points=[config.t0], epsabs=1e-13, epsrel=1e-12, limit=200)
    return value


# Hypergeometric parameters

@dataclass(frozen=True)
class HypergeomExponents:
    """
    Exponents of the hypergeometric reduction

    mu = i tau E1/2, nu = i tau q dA/2, lam = i tau E2/2, with the alpha
    coefficients of the reduced equation. The later-side set (sigma, rho, eta)
    coincides with (lam, nu, mu).
    """
    mu: complex
    nu: complex
    lam: complex
    alpha0: complex
    alpha1: complex
    alpha2: complex

    @property
    def sigma(self) -> complex:
        return self.lam

    @property
    def rho(self) -> complex:
        return self.nu

    @property
    def eta(self) -> complex:
        return self.mu

    @property
    def betas(self) -> Tuple[complex, complex, complex]:
        """Later-side coefficients; identical to the earlier-side alphas"""
        return self.alpha0, self.alpha1, self.alpha2

    def nu_from_alphas(self) -> complex:
        """nu = (1 - sqrt(1 - 4(alpha0 + alpha1 + alpha2)))/2, principal root"""
        return 0.5 * (1.0 - cmath.sqrt(1.0 - 4.0 * (self.alpha0 + self.alpha1 + self.alpha2)))

    def is_purely_imaginary(self, tol: float = IMAGINARY_TOL) -> bool:
        return all(abs(v.real) <= tol * max(1.0, abs(v)) for v in (self.mu, self.nu, self.lam))


def exponents(config: SmoothStepConfig) -> HypergeomExponents:
    """Exponents and alpha coefficients of the tanh-step reduction"""
    tau, e1, e2, delta = config.tau, config.e1, config.e2, config.delta
    quarter = 0.25 * tau * tau
    return HypergeomExponents(
        mu=0.5j * tau * e1,
        nu=0.5j * tau * delta,
        lam=0.5j * tau * e2,
        alpha0=-quarter * complex(e2 * e2 + e1 * e1 - delta * delta, -2.0 * delta / tau),
        alpha1=complex(quarter * e1 * e1),
        alpha2=complex(quarter * e2 * e2),
    )


def _earlier_params(ex: HypergeomExponents, z: complex) -> Hyp2F1Params:
    return Hyp2F1Params(-ex.mu + ex.nu - ex.lam, -ex.mu + ex.nu + ex.lam, 1.0 - 2.0 * ex.mu, z)


def _forward_params(ex: HypergeomExponents, z: complex) -> Hyp2F1Params:
    return Hyp2F1Params(ex.lam + ex.nu - ex.mu, ex.lam + ex.nu + ex.mu, 1.0 + 2.0 * ex.lam, z)


def _backward_params(ex: HypergeomExponents, z: complex) -> Hyp2F1Params:
    return Hyp2F1Params(-ex.lam + ex.nu - ex.mu, -ex.lam + ex.nu + ex.mu, 1.0 - 2.0 * ex.lam, z)


def _slope(params: Hyp2F1Params, tau: float) -> complex:
    """i (4/tau) ab/c"""
    return 4.0j / tau * params.a * params.b / params.c


# Boundary matching

@dataclass(frozen=True)
class MatchingBlocks:
    """
    Hypergeometric values F1..F6 at z = -1 and weights D1..D6

    F1, F3, F5 are the earlier, later-forward and later-backward functions;
    F2, F4, F6 the same with every parameter raised by one.
    """
    f_values: Tuple[complex, ...]
    d_values: Tuple[complex, ...]
    mass: float

    def earlier(self) -> Tuple[complex, complex]:
        """Dirac-Pauli combinations (2m + D1)F1 - D2F2 and (2m - D1)F1 + D2F2"""
        f, d, m2 = self.f_values, self.d_values, 2.0 * self.mass
        return (m2 + d[0]) * f[0] - d[1] * f[1], (m2 - d[0]) * f[0] + d[1] * f[1]

    def forward(self) -> Tuple[complex, complex]:
        f, d, m2 = self.f_values, self.d_values, 2.0 * self.mass
        return (m2 + d[2]) * f[2] + d[3] * f[3], (m2 - d[2]) * f[2] - d[3] * f[3]

    def backward(self) -> Tuple[complex, complex]:
        f, d, m2 = self.f_values, self.d_values, 2.0 * self.mass
        return (m2 - d[4]) * f[4] + d[5] * f[5], (m2 + d[4]) * f[4] - d[5] * f[5]


def matching_blocks(config: SmoothStepConfig) -> MatchingBlocks:
    """
    Evaluate the six hypergeometric values and weights of the matched system at t0

    D4 carries the denominator 1 + 2 lam of its own hypergeometric function.
    """
    ex = exponents(config)
    tol = min(settings.hyp2f1_tol, 1e-12)
    k1, k2, e1, e2, delta = config.k1, config.k2, config.e1, config.e2, config.delta

    base = (_earlier_params(ex, -1.0), _forward_params(ex, -1.0), _backward_params(ex, -1.0))
    f_values = []
    for params in base:
        f_values.append(hyp2f1(params, tol))
        f_values.append(hyp2f1(params.shifted(), tol))

    d_values = (
        complex(2.0 * e1 - delta - k2 - k1),
        _slope(base[0], config.tau),
        complex(2.0 * e2 + delta - k2 - k1),
        _slope(base[1], config.tau),
        complex(2.0 * e2 - delta + k2 + k1),
        _slope(base[2], config.tau),
    )
    return MatchingBlocks(tuple(f_values), d_values, config.mass)


def coefficient_ratios(config: SmoothStepConfig) -> Tuple[complex, complex]:
    """
    Later-forward and later-backward coefficients relative to the incident one

    The exponential prefactors exp(+-pi tau E/2) of the printed ratios are
    struck out; they cancel against those of the amplitudes.

    Args:
        config: Smooth step configuration

    Returns:
        (reduced C3/C2, reduced C4/C2)
    """
    blocks = matching_blocks(config)
    p1, q1 = blocks.earlier()
    p3, q3 = blocks.forward()
    p5, q5 = blocks.backward()

    det = p3 * q5 - p5 * q3
    scale = abs(p3 * q5) + abs(p5 * q3)
    logger.debug("smooth-step matching det=%s scale=%.6g", det, scale)
    if not abs(det) >= settings.degenerate_matching_tol * scale:
        raise DegenerateMatchingError(
            f"singular matching system: |det| = {abs(det):.3g} at scale {scale:.3g}",
            determinant=det,
            scale=scale,
        )
    return (p1 * q5 - p5 * q1) / det, (p3 * q1 - p1 * q3) / det


def naive_coefficient_ratios(config: SmoothStepConfig) -> Tuple[complex, complex]:
    """Coefficient ratios with their exponential prefactors restored (small tau only)"""
    exp_forward = 0.5 * math.pi * config.tau * (config.e1 + config.e2)
    exp_backward = 0.5 * math.pi * config.tau * (config.e1 - config.e2)
    if exp_forward > MAX_EXPONENT or abs(exp_backward) > MAX_EXPONENT:
        raise DomainError(f"prefactor exp({exp_forward:.1f}) overflows; use the reduced ratios")
    c3, c4 = coefficient_ratios(config)
    return c3 * math.exp(exp_forward), c4 * math.exp(exp_backward)


def smooth_scatter(config: SmoothStepConfig, reduced: bool = True) -> ScatterOutcome:
    """
    Later-forward and later-backward probabilities of the smooth step

    f and b are the reduced coefficient ratios times the ratios of the
    Dirac-Pauli first components of the later and incident plane waves;
    F = |f|^2/(|f|^2 + |b|^2) and B = |b|^2/(|f|^2 + |b|^2).

    Args:
        config: Smooth step configuration
        reduced: False goes through the printed ratios and their prefactors

    Returns:
        ScatterOutcome with (f, b) and (F, B)
    """
    if reduced:
        c3, c4 = coefficient_ratios(config)
    else:
        n3, n4 = naive_coefficient_ratios(config)
        c3 = n3 * math.exp(-0.5 * math.pi * config.tau * (config.e1 + config.e2))
        c4 = n4 * math.exp(-0.5 * math.pi * config.tau * (config.e1 - config.e2))

    m, k1, k2, e1, e2 = config.mass, config.k1, config.k2, config.e1, config.e2
    incident = dirac_upper_factor(e1, k1, m)
    f = c3 * dirac_upper_factor(e2, k2, m) / incident
    b = c4 * dirac_upper_factor(-e2, k2, m) / incident

    weight_f, weight_b = abs(f) ** 2, abs(b) ** 2
    total = weight_f + weight_b
    return ScatterOutcome(
        amp_primary=f,
        amp_secondary=b,
        prob_primary=weight_f / total,
        prob_secondary=weight_b / total,
        regime=Regime.PROPAGATING,
        energies={'incident': e1, 'forward': e2, 'backward': -e2},
        momenta={'incident': complex(config.momentum), 'forward': complex(config.momentum), 'backward': complex(config.momentum)},
    )


# Wavefunctions

def _check_time(config: SmoothStepConfig, t: float) -> float:
    if not math.isfinite(t):
        raise DomainError(f"time must be finite, got {t}")
    return (t - config.t0) / config.tau


def _kinetic_at(config: SmoothStepConfig, t: float) -> float:
    return config.momentum - potential_at(config, t)


def _branch(params: Hyp2F1Params) -> Tuple[complex, complex]:
    """2F1 and its derivative, continued past |z| = 1 on the negative axis"""
    outside = abs(params.z) > 1.0
    return (
        hyp2f1(params, allow_continuation=outside),
        hyp2f1_derivative(params, allow_continuation=outside),
    )


def _sample(config: SmoothStepConfig, t: float, phi: complex, i_dphi: complex) -> SpinorSample:
    theta = (i_dphi - _kinetic_at(config, t) * phi) / config.mass
    return SpinorSample(t, (phi, theta), Representation.WEYL)


def _earlier_at(config: SmoothStepConfig, ex: HypergeomExponents, t: float) -> SpinorSample:
    x = _check_time(config, t)
    s = t - config.t0
    if x > 0:
        logger.warning("earlier-side solution evaluated after t0 (t - t0 = %g tau)", x)
    zeta = -math.exp(min(2.0 * x, MAX_EXPONENT))
    value, slope = _branch(_earlier_params(ex, zeta))
    carrier = cmath.exp(-1j * config.e1 * s) * (1.0 - zeta) ** ex.nu
    phi = carrier * value
    rate = 2.0 / config.tau
    i_dphi = (config.e1 - 1j * rate * ex.nu * zeta / (1.0 - zeta)) * phi + 1j * rate * zeta * carrier * slope
    return _sample(config, t, phi, i_dphi)


def later_modes_at(config: SmoothStepConfig, t: float) -> Tuple[SpinorSample, SpinorSample]:
    """
    The later-forward and later-backward Weyl solutions at time t

    Normalised so that they tend to exp(-+ i E2 (t - t0)) times the plane-wave
    spinor as t -> +inf.
    """
    x = _check_time(config, t)
    s = t - config.t0
    if x < 0:
        logger.warning("later-side solutions evaluated before t0 (t - t0 = %g tau)", x)
    ex = exponents(config)
    zeta = -math.exp(min(-2.0 * x, MAX_EXPONENT))
    rate = 2.0 / config.tau
    drift = 1j * rate * ex.nu * zeta / (1.0 - zeta)
    envelope = (1.0 - zeta) ** ex.nu

    modes = []
    for params, sign in ((_forward_params(ex, zeta), -1), (_backward_params(ex, zeta), 1)):
        value, slope = _branch(params)
        carrier = cmath.exp(sign * 1j * config.e2 * s) * envelope
        phi = carrier * value
        i_dphi = (-sign * config.e2 + drift) * phi - 1j * rate * zeta * carrier * slope
        modes.append(_sample(config, t, phi, i_dphi))
    return modes[0], modes[1]


def wavefunction_at(config: SmoothStepConfig, t: float, side: Side) -> SpinorSample:
    """
    Weyl spinor (phi, theta) at time t from the exact solution, incident coefficient 1

    The earlier form is natural for t <= t0 and the later form for t >= t0;
    evaluating either outside its half-line logs a warning and continues the
    hypergeometric series through the Pfaff map.

    Args:
        config: Smooth step configuration
        t: Time in natural units
        side: Which closed form to evaluate

    Returns:
        SpinorSample in the Weyl representation
    """
    side = Side(side)
    if side == Side.EARLIER:
        return _earlier_at(config, exponents(config), t)
    c3, c4 = coefficient_ratios(config)
    forward, backward = later_modes_at(config, t)
    values = tuple(c3 * u + c4 * v for u, v in zip(forward.components, backward.components))
    return SpinorSample(t, values, Representation.WEYL)


def asymptotic_earlier(config: SmoothStepConfig, t: float) -> SpinorSample:
    """Incident plane wave exp(-i E1 (t - t0)) (1, (E1 - k1)/m) long before the step"""
    k1, e1, m = config.k1, config.e1, config.mass
    phi = cmath.exp(-1j * e1 * (t - config.t0))
    ratio = m / (e1 + k1) if k1 > 0 else (e1 - k1) / m
    return SpinorSample(t, (phi, ratio * phi), Representation.WEYL)
