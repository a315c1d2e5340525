"""
ODE oracle for temporal vector-potential steps
Direct integration of the two-component Weyl system and amplitude extraction, independent of the hypergeometric route
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import erf

from dirac_steps.core.config import settings
from dirac_steps.core.errors import DomainError, ExtractionError, IntegrationError
from dirac_steps.core.smooth_step import field_at, potential_at
from dirac_steps.core.spinors import Representation, SpinorSample, dirac_upper_factor
from dirac_steps.models.schemas import IntegrationSettings, Regime, ScatterOutcome, SmoothStepConfig

logger = logging.getLogger(__name__)

Profile = Callable[[float], float]

# DOP853 evaluates the right-hand side 12 times per accepted step
EVALS_PER_STEP = 12


class _StepBudgetExceeded(Exception):
    pass


@dataclass
class WeylSystem:
    """
    i phi' = k(t) phi + m theta,  i theta' = -k(t) theta + m phi,  k(t) = p - qA(t)

    The canonical momentum p is a fixed parameter of the system, never evolved.
    """
    momentum: float
    mass: float
    potential: Profile
    max_evals: int = 0
    evals: int = 0

    def kinetic(self, t: float) -> float:
        return self.momentum - self.potential(t)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        self.evals += 1
        if self.max_evals and self.evals > self.max_evals:
            raise _StepBudgetExceeded()
        k = self.kinetic(t)
        phi, theta = y
        return np.array([-1j * (k * phi + self.mass * theta), -1j * (-k * theta + self.mass * phi)])


@dataclass
class Trajectory:
    """Sampled and dense solution of a WeylSystem"""
    times: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    system: WeylSystem
    dense: Callable[[float], np.ndarray]
    nfev: int = 0

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def at(self, t: float) -> SpinorSample:
        """Weyl spinor from the dense output"""
        if not self.t_start <= t <= self.t_end:
            raise DomainError(f"t = {t} outside the integrated window [{self.t_start}, {self.t_end}]")
        phi, theta = self.dense(t)
        return SpinorSample(t, (complex(phi), complex(theta)), Representation.WEYL)

    def derivative(self, t: float) -> np.ndarray:
        """(phi', theta') from the equations of motion on the dense output"""
        return self.system.rhs(t, self.dense(t))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.phi)) and np.all(np.isfinite(self.theta)))


def erf_ramp(config: SmoothStepConfig) -> Profile:
    """qA(t) = qA1 + (q dA/2)(1 + erf((t - t0)/tau)), an alternative smooth ramp"""
    def profile(t: float) -> float:
        return config.qa1 + 0.5 * config.delta * (1.0 + float(erf((t - config.t0) / config.tau)))
    return profile


def _incident_state(config: SmoothStepConfig, t: float) -> np.ndarray:
    """Incident plane wave (1, (E1 - k1)/m) exp(-i E1 (t - t0))"""
    k1, e1, m = config.k1, config.e1, config.mass
    ratio = m / (e1 + k1) if k1 > 0 else (e1 - k1) / m
    phase = np.exp(-1j * e1 * (t - config.t0))
    return np.array([phase, ratio * phase], dtype=complex)


def integrate(
    config: SmoothStepConfig,
    integration: Optional[IntegrationSettings] = None,
    potential: Optional[Profile] = None,
    fixed_step: Optional[float] = None,
) -> Trajectory:
    """
    Integrate the Weyl system across the step

    Starts at t0 - t_start_sigma tau from the incident asymptotic solution and
    runs to t0 + t_end_sigma tau with an adaptive 8th-order Runge-Kutta scheme.

    Args:
        config: Step configuration (p, m, tau, t0 and the asymptotic potentials)
        integration: Tolerances, window and step budget
        potential: qA(t) profile, defaults to the tanh step of the config
        fixed_step: Take equal steps of this size instead of adapting

    Returns:
        Trajectory with dense output
    """
    integration = integration or IntegrationSettings()
    profile = potential or (lambda t: potential_at(config, t))
    system = WeylSystem(
        momentum=config.momentum,
        mass=config.mass,
        potential=profile,
        max_evals=EVALS_PER_STEP * integration.max_steps,
    )
    t_start = config.t0 - integration.t_start_sigma * config.tau
    t_end = config.t0 + integration.t_end_sigma * config.tau

    options = {'rtol': integration.rel_tol, 'atol': integration.abs_tol}
    if fixed_step is not None:
        if not 0 < fixed_step <= t_end - t_start:
            raise DomainError(f"fixed step {fixed_step} outside (0, {t_end - t_start}]")
        # tolerances loose enough that max_step always binds
        options = {'rtol': 1e3, 'atol': 1e3, 'first_step': fixed_step, 'max_step': fixed_step}

    try:
        solution = solve_ivp(
            system.rhs,
            (t_start, t_end),
            _incident_state(config, t_start),
            method="DOP853",
            dense_output=True,
            **options,
        )
    except _StepBudgetExceeded:
        raise IntegrationError(
            f"step budget of {integration.max_steps} exhausted",
            diagnostics={'status': -1, 'message': "step budget exhausted", 't_reached': None, 'nfev': system.evals},
        ) from None
    system.max_evals = 0

    diagnostics = {
        'status': solution.status,
        'message': solution.message,
        't_reached': float(solution.t[-1]),
        'nfev': solution.nfev,
    }
    if not solution.success:
        raise IntegrationError(f"integration failed: {solution.message}", diagnostics=diagnostics)

    trajectory = Trajectory(
        times=solution.t,
        phi=solution.y[0],
        theta=solution.y[1],
        system=system,
        dense=solution.sol,
        nfev=solution.nfev,
    )
    if not trajectory.is_finite():
        raise IntegrationError("non-finite values in trajectory", diagnostics=diagnostics)
    logger.debug("integrated %d steps, %d evaluations", len(solution.t) - 1, solution.nfev)

    if integration.check_second_order and potential is None:
        residual = second_order_residual(trajectory, config)
        if residual > settings.residual_tol:
            logger.warning("second-order residual %.3g exceeds %.1g", residual, settings.residual_tol)
    return trajectory


def extract_amplitudes(traj: Trajectory, config: SmoothStepConfig, t: Optional[float] = None) -> Tuple[complex, complex]:
    """
    Expand the late-time spinor in the later-medium plane waves

    Solves [[1, 1], [(E2 - k2)/m, (-E2 - k2)/m]] (u, v) = (phi, theta) and
    strips the phases: g_f = u exp(i E2 s), g_b = v exp(-i E2 s), s = t - t0.

    Args:
        traj: Integrated trajectory
        config: Step configuration
        t: Extraction time, defaults to the end of the trajectory

    Returns:
        (g_f, g_b)
    """
    t = traj.t_end if t is None else t
    sample = traj.at(t)
    k2, e2, m = config.k2, config.e2, config.mass
    basis = np.array([[1.0, 1.0], [(e2 - k2) / m, (-e2 - k2) / m]], dtype=complex)
    condition = float(np.linalg.cond(basis))
    if condition > settings.extraction_max_condition:
        raise ExtractionError(f"extraction basis condition {condition:.3g} too large", condition=condition)
    u, v = np.linalg.solve(basis, sample.as_array())
    s = t - config.t0
    return complex(u * np.exp(1j * e2 * s)), complex(v * np.exp(-1j * e2 * s))


def oracle_scatter(config: SmoothStepConfig, integration: Optional[IntegrationSettings] = None) -> ScatterOutcome:
    """
    Forward and backward probabilities from direct integration

    Amplitudes are weighted by the squared Dirac-Pauli first components of the
    later plane waves, w_f = |m + E2 - k2|^2 and w_b = |m - E2 - k2|^2, so a
    null step gives F = 1.
    """
    traj = integrate(config, integration)
    g_f, g_b = extract_amplitudes(traj, config)
    m, k1, k2, e1, e2 = config.mass, config.k1, config.k2, config.e1, config.e2
    incident = dirac_upper_factor(e1, k1, m)
    f = g_f * dirac_upper_factor(e2, k2, m) / incident
    b = g_b * dirac_upper_factor(-e2, k2, m) / incident
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


def refinement_order(config: SmoothStepConfig, step: float, integration: Optional[IntegrationSettings] = None) -> float:
    """
    Observed convergence order of the integrator

    Integrates with fixed steps h and h/2 and compares the final spinors with
    a tight adaptive reference: order = log2(err(h) / err(h/2)).
    """
    integration = integration or IntegrationSettings(t_start_sigma=5.0, t_end_sigma=5.0)
    reference = integrate(config, integration.model_copy(update={'rel_tol': 1e-13, 'abs_tol': 1e-16}))
    target = reference.at(reference.t_end).as_array()
    errors = []
    for h in (step, 0.5 * step):
        traj = integrate(config, integration, fixed_step=h)
        errors.append(float(np.max(np.abs(traj.at(traj.t_end).as_array() - target))))
    logger.debug("fixed-step errors %.3g (h=%g), %.3g (h=%g)", errors[0], step, errors[1], 0.5 * step)
    if errors[1] == 0.0:
        raise DomainError("fine-step error vanished; step too small to measure an order")
    return math.log2(errors[0] / errors[1])


def second_order_residual(traj: Trajectory, config: SmoothStepConfig, points: int = 201) -> float:
    """
    Normalised residual of phi'' + (k^2 + m^2 + i k') phi = 0 along the dense solution

    phi'' is a Richardson-extrapolated central difference of phi' taken from
    the equations of motion; k' = -dqA/dt is the field pulse.
    """
    h = min(2e-3, 0.02 * config.tau, 0.02 / max(config.e1, config.e2))
    times = np.linspace(traj.t_start + 2 * h, traj.t_end - 2 * h, points)
    worst, scale = 0.0, 0.0
    for t in times:
        def dphi(x: float) -> complex:
            return complex(traj.derivative(x)[0])

        coarse = (dphi(t + h) - dphi(t - h)) / (2 * h)
        fine = (dphi(t + h / 2) - dphi(t - h / 2)) / h
        second = (4 * fine - coarse) / 3
        phi = complex(traj.dense(t)[0])
        k = config.momentum - potential_at(config, t)
        restoring = (k * k + config.mass ** 2) * phi
        worst = max(worst, abs(second + restoring + 1j * field_at(config, t) * phi))
        scale = max(scale, abs(restoring))
    residual = worst / scale if scale > 0 else math.inf
    logger.debug("second-order residual %.3g over %d points", residual, points)
    return residual
