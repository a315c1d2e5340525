import itertools
import logging
import math
from dataclasses import fields

import numpy as np
import pytest

from dirac_steps.core import ode_oracle
from dirac_steps.core.errors import DomainError, ExtractionError, IntegrationError
from dirac_steps.core.ode_oracle import (
    WeylSystem,
    erf_ramp,
    extract_amplitudes,
    integrate,
    oracle_scatter,
    refinement_order,
    second_order_residual,
)
from dirac_steps.core.smooth_step import potential_at, smooth_scatter
from dirac_steps.models.schemas import IntegrationSettings, SmoothStepConfig

COMPARISON = IntegrationSettings(t_start_sigma=10.0, t_end_sigma=10.0)
TIGHT = IntegrationSettings(rel_tol=1e-12, abs_tol=1e-14, t_start_sigma=12.0, t_end_sigma=12.0)


@pytest.mark.parametrize("qa2, tau", list(itertools.product([0.5, 1.0, 2.0, 3.0, 3.5], [0.01, 0.1, 0.3, 1.0, 3.0])))
def test_oracle_matches_closed_form(qa2, tau):
    config = SmoothStepConfig.from_energy(2.0, 0.0, qa2, tau, mass=1.0)
    closed = smooth_scatter(config)
    oracle = oracle_scatter(config, COMPARISON)
    assert abs(oracle.prob_primary - closed.prob_primary) <= 1e-6
    assert abs(oracle.prob_secondary - closed.prob_secondary) <= 1e-6


@pytest.mark.parametrize("qa2", [1.0, 3.0])
def test_oracle_matches_closed_form_tightly(qa2):
    config = SmoothStepConfig.from_energy(2.0, 0.0, qa2, 0.3, mass=1.0)
    assert oracle_scatter(config, TIGHT).prob_primary == pytest.approx(smooth_scatter(config).prob_primary, abs=1e-8)


def test_null_step_oracle(null_step):
    outcome = oracle_scatter(null_step, COMPARISON)
    assert outcome.prob_primary == pytest.approx(1.0, abs=1e-8)
    assert abs(outcome.amp_primary) == pytest.approx(1.0, abs=1e-7)


def test_single_canonical_momentum(unit_step):
    assert [f.name for f in fields(WeylSystem)].count('momentum') == 1
    traj = integrate(unit_step)
    assert traj.system.momentum == unit_step.momentum
    for t in np.linspace(traj.t_start, traj.t_end, 7):
        k = unit_step.momentum - potential_at(unit_step, t)
        y = np.array([0.3 + 0.1j, -0.2j])
        expected = -1j * np.array([[k, 1.0], [1.0, -k]]) @ y
        assert np.allclose(traj.system.rhs(t, y), expected)


@pytest.mark.parametrize("profile", ["tanh", "erf"])
def test_norm_is_conserved(unit_step, profile):
    potential = erf_ramp(unit_step) if profile == "erf" else None
    traj = integrate(unit_step, potential=potential)
    norms = np.abs(traj.phi) ** 2 + np.abs(traj.theta) ** 2
    assert np.allclose(norms, norms[0], rtol=1e-8)


def test_convergence_order_is_nominal():
    config = SmoothStepConfig.from_energy(2.0, 0.0, 1.0, 1.0, mass=1.0)
    assert refinement_order(config, 0.25) == pytest.approx(8.0, abs=0.5)


def test_fixed_step_must_fit_the_window(unit_step):
    with pytest.raises(DomainError):
        integrate(unit_step, fixed_step=-0.1)


def test_second_order_form_is_satisfied(unit_step):
    traj = integrate(unit_step)
    assert second_order_residual(traj, unit_step) < 1e-5


def test_extraction_at_interior_time(unit_step):
    traj = integrate(unit_step, COMPARISON)
    late = extract_amplitudes(traj, unit_step)
    earlier = extract_amplitudes(traj, unit_step, t=unit_step.t0 + 9 * unit_step.tau)
    assert np.allclose(late, earlier, atol=1e-7)


def test_trajectory_window_enforced(unit_step):
    traj = integrate(unit_step)
    with pytest.raises(DomainError):
        traj.at(traj.t_end + 1.0)


def test_ill_conditioned_extraction(unit_step, monkeypatch):
    traj = integrate(unit_step)
    monkeypatch.setattr(ode_oracle.settings, "extraction_max_condition", 1.0)
    with pytest.raises(ExtractionError) as info:
        extract_amplitudes(traj, unit_step)
    assert info.value.condition > 1.0


def test_step_budget_exhaustion(unit_step):
    with pytest.raises(IntegrationError) as info:
        integrate(unit_step, IntegrationSettings(max_steps=1))
    assert info.value.diagnostics['nfev'] > 12


def test_very_short_step_matches_sharp_values():
    config = SmoothStepConfig.from_energy(2.0, 0.0, 1.0, 1e-3, mass=1.0)
    assert oracle_scatter(config).prob_primary == pytest.approx(0.9953, abs=1e-4)
    balanced = SmoothStepConfig.from_energy(2.0, 0.0, 2.0 * math.sqrt(3.0), 1e-3, mass=1.0)
    outcome = oracle_scatter(balanced)
    assert outcome.prob_primary == pytest.approx(0.5, abs=1e-3)
    assert outcome.prob_secondary == pytest.approx(0.5, abs=1e-3)


def test_adiabatic_step_oracle():
    config = SmoothStepConfig.from_energy(2.0, 0.0, 2.0, 2.0 * math.pi, mass=1.0)
    assert oracle_scatter(config).prob_secondary <= 0.01


def test_tighter_tolerances_barely_move_the_endpoint(unit_step):
    loose = IntegrationSettings()
    tight = loose.model_copy(update={'rel_tol': loose.rel_tol / 2, 'abs_tol': loose.abs_tol / 2})
    end = integrate(unit_step, loose)
    refined = integrate(unit_step, tight)
    for first, second in ((end.phi[-1], refined.phi[-1]), (end.theta[-1], refined.theta[-1])):
        assert abs(first - second) < 10 * loose.rel_tol * max(1.0, abs(first))


def test_second_order_check_runs_quietly(unit_step, caplog):
    with caplog.at_level(logging.WARNING, logger="dirac_steps.core.ode_oracle"):
        integrate(unit_step, TIGHT.model_copy(update={'check_second_order': True}))
    assert "second-order residual" not in caplog.text


def test_second_order_check_reports_excess(unit_step, caplog, monkeypatch):
    monkeypatch.setattr(ode_oracle.settings, "residual_tol", 1e-30)
    with caplog.at_level(logging.WARNING, logger="dirac_steps.core.ode_oracle"):
        integrate(unit_step, IntegrationSettings(check_second_order=True))
    assert "second-order residual" in caplog.text
