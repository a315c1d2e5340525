import logging
import math

import numpy as np
import pytest

from dirac_steps.core import smooth_step
from dirac_steps.core.errors import DegenerateMatchingError, DomainError
from dirac_steps.core.ode_oracle import integrate, oracle_scatter
from dirac_steps.core.sharp_scattering import scatter_vector_temporal
from dirac_steps.core.smooth_step import (
    Side,
    asymptotic_earlier,
    coefficient_ratios,
    exponents,
    field_at,
    field_impulse,
    later_modes_at,
    matching_blocks,
    naive_coefficient_ratios,
    potential_at,
    smooth_scatter,
    wavefunction_at,
)
from dirac_steps.core.units import natural_de_broglie_period
from dirac_steps.models.schemas import IntegrationSettings, SmoothStepConfig

ENERGY = 2.0
PERIOD = natural_de_broglie_period(ENERGY)
GRID = np.linspace(0.0, 5.0, 101)


def scan(tau):
    for qa2 in GRID:
        config = SmoothStepConfig.from_energy(ENERGY, 0.0, float(qa2), tau, mass=1.0)
        yield qa2, smooth_scatter(config), scatter_vector_temporal(ENERGY, 0.0, float(qa2), 1.0)


# Profiles

def test_potential_reaches_its_limits(unit_step):
    assert potential_at(unit_step, unit_step.t0) == pytest.approx(0.5)
    assert abs(potential_at(unit_step, unit_step.t0 + 8 * unit_step.tau) - 1.0) <= 2e-7
    assert abs(potential_at(unit_step, unit_step.t0 - 8 * unit_step.tau)) <= 2e-7


def test_field_pulse(unit_step):
    assert field_at(unit_step, unit_step.t0) == pytest.approx(-0.5 / unit_step.tau)
    assert field_at(unit_step, 1e6) == 0.0
    assert field_impulse(unit_step) == pytest.approx(-unit_step.delta, abs=1e-9)


# Exponents and matching

def test_exponents_of_unit_step(unit_step):
    ex = exponents(unit_step)
    assert ex.mu == pytest.approx(0.5j * 0.1 * 2.0)
    assert ex.nu == pytest.approx(0.05j)
    assert ex.nu_from_alphas() == pytest.approx(ex.nu, abs=1e-14)
    assert ex.is_purely_imaginary()
    assert (ex.sigma, ex.rho, ex.eta) == (ex.lam, ex.nu, ex.mu)
    assert ex.betas == (ex.alpha0, ex.alpha1, ex.alpha2)


def test_earlier_block_against_raw_series(unit_step, raw_series):
    ex = exponents(unit_step)
    blocks = matching_blocks(unit_step)
    a, b, c = -ex.mu + ex.nu - ex.lam, -ex.mu + ex.nu + ex.lam, 1.0 - 2.0 * ex.mu
    assert abs(blocks.f_values[0] - raw_series(a, b, c, -1.0)) <= 1e-10
    slope = 4.0j / unit_step.tau * a * b / c
    assert abs(blocks.d_values[1] - slope) <= 1e-14 * max(1.0, abs(slope))


@pytest.mark.parametrize("tau", [0.01, 0.3, 3.0])
def test_null_step_is_transparent(null_step, tau):
    config = null_step.model_copy(update={'tau': tau})
    c3, c4 = coefficient_ratios(config)
    assert c3 == pytest.approx(1.0, abs=1e-10)
    assert abs(c4) <= 1e-10
    outcome = smooth_scatter(config)
    assert outcome.prob_primary == pytest.approx(1.0, abs=1e-12)


def test_sharp_limit(unit_step):
    config = unit_step.model_copy(update={'tau': 1e-4})
    smooth = smooth_scatter(config)
    sharp = scatter_vector_temporal(ENERGY, 0.0, 1.0, 1.0)
    assert smooth.prob_primary == pytest.approx(sharp.prob_primary, abs=1e-4)
    assert smooth.prob_secondary == pytest.approx(sharp.prob_secondary, abs=1e-4)


def test_naive_ratios_agree_for_short_steps(unit_step):
    reduced = smooth_scatter(unit_step)
    naive = smooth_scatter(unit_step, reduced=False)
    assert naive.prob_secondary == pytest.approx(reduced.prob_secondary, rel=1e-10)
    assert naive.amp_primary == pytest.approx(reduced.amp_primary, rel=1e-10)


def test_naive_ratios_overflow_for_long_steps(unit_step):
    config = unit_step.model_copy(update={'tau': 200.0})
    with pytest.raises(DomainError):
        naive_coefficient_ratios(config)
    with pytest.raises(DomainError):
        smooth_scatter(config, reduced=False)


def test_result_does_not_depend_on_step_time(unit_step):
    shifted = unit_step.model_copy(update={'t0': 5.0})
    assert smooth_scatter(shifted).prob_primary == pytest.approx(smooth_scatter(unit_step).prob_primary, abs=1e-12)


def test_degenerate_system_detected(unit_step, monkeypatch):
    monkeypatch.setattr(smooth_step.settings, "degenerate_matching_tol", 2.0)
    with pytest.raises(DegenerateMatchingError) as info:
        coefficient_ratios(unit_step)
    assert info.value.scale > 0


# Regimes of the step duration

def test_short_step_is_close_to_sharp_step():
    # the tanh ramp still differs from the sharp step by ~3% at qA = 5m when tau = T_dB/40
    tau = PERIOD / 40.0
    worst = max(abs(smooth.prob_secondary - sharp.prob_secondary) for _, smooth, sharp in scan(tau))
    assert worst <= 0.026


def test_short_step_closed_form_matches_integration():
    tau = PERIOD / 40.0
    integration = IntegrationSettings(t_start_sigma=10.0, t_end_sigma=10.0)
    for qa2 in np.linspace(0.0, 5.0, 11):
        config = SmoothStepConfig.from_energy(ENERGY, 0.0, float(qa2), tau, mass=1.0)
        assert smooth_scatter(config).prob_secondary == pytest.approx(
            oracle_scatter(config, integration).prob_secondary, abs=1e-6
        )
    config = SmoothStepConfig.from_energy(ENERGY, 0.0, 5.0, tau, mass=1.0)
    assert smooth_scatter(config).prob_secondary == pytest.approx(0.7181, abs=1e-3)


def test_sharp_limit_is_approached_monotonically():
    worst = []
    for tau in (0.3, 0.1, 0.03, 0.01):
        worst.append(max(abs(smooth.prob_secondary - sharp.prob_secondary) for _, smooth, sharp in scan(tau)))
    assert all(later < earlier for earlier, later in zip(worst, worst[1:]))
    assert worst[-1] < 1e-3
    config = SmoothStepConfig.from_energy(ENERGY, 0.0, 5.0, 1e-4, mass=1.0)
    sharp = scatter_vector_temporal(ENERGY, 0.0, 5.0, 1.0)
    assert smooth_scatter(config).prob_secondary == pytest.approx(sharp.prob_secondary, abs=1e-5)


def test_intermediate_step_halves_backscatter():
    tau = PERIOD / 4.0
    checked = 0
    for _, smooth, sharp in scan(tau):
        if sharp.prob_secondary > 0.05:
            assert smooth.prob_secondary < 0.5 * sharp.prob_secondary
            checked += 1
    assert checked > 0


def test_adiabatic_step_suppresses_backscatter():
    for _, smooth, _ in scan(2.0 * PERIOD):
        assert smooth.prob_secondary <= 0.01
        assert smooth.prob_primary + smooth.prob_secondary == pytest.approx(1.0, abs=1e-12)


# Wavefunctions

def test_wavefunction_is_continuous_at_the_step(unit_step):
    before = wavefunction_at(unit_step, unit_step.t0, Side.EARLIER)
    after = wavefunction_at(unit_step, unit_step.t0, Side.LATER)
    assert np.allclose(before.as_array(), after.as_array(), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("offset", [-0.5, 0.5])
def test_both_closed_forms_solve_the_same_problem(unit_step, offset, caplog):
    t = unit_step.t0 + offset * unit_step.tau
    with caplog.at_level(logging.WARNING, logger="dirac_steps.core.smooth_step"):
        earlier = wavefunction_at(unit_step, t, "earlier")
        later = wavefunction_at(unit_step, t, "later")
    assert np.allclose(earlier.as_array(), later.as_array(), rtol=1e-8, atol=1e-8)
    assert "evaluated" in caplog.text


def test_incident_wave_long_before_the_step(unit_step):
    t = unit_step.t0 - 15 * unit_step.tau
    exact = wavefunction_at(unit_step, t, Side.EARLIER)
    assert np.allclose(exact.as_array(), asymptotic_earlier(unit_step, t).as_array(), atol=1e-8)


def test_later_modes_become_plane_waves(unit_step):
    t = unit_step.t0 + 15 * unit_step.tau
    forward, backward = later_modes_at(unit_step, t)
    s = t - unit_step.t0
    assert forward.phi == pytest.approx(np.exp(-1j * unit_step.e2 * s), abs=1e-8)
    assert backward.phi == pytest.approx(np.exp(1j * unit_step.e2 * s), abs=1e-8)
    assert forward.theta == pytest.approx((unit_step.e2 - unit_step.k2) * forward.phi, abs=1e-8)


def test_non_finite_time_rejected(unit_step):
    with pytest.raises(DomainError):
        wavefunction_at(unit_step, math.nan, Side.EARLIER)


def test_slow_steps_suppress_backscatter_further():
    backscatter = []
    for tau in np.linspace(0.5, 10.0, 20):
        config = SmoothStepConfig.from_energy(ENERGY, 0.0, 1.0, float(tau), mass=1.0)
        backscatter.append(smooth_scatter(config).prob_secondary)
    assert all(later <= earlier + 1e-12 for earlier, later in zip(backscatter, backscatter[1:]))
    assert backscatter[-1] < backscatter[0]


def test_closed_form_follows_direct_integration(unit_step):
    integration = IntegrationSettings(rel_tol=1e-12, abs_tol=1e-14, t_start_sigma=12.0, t_end_sigma=12.0)
    traj = integrate(unit_step, integration)
    for t in np.linspace(unit_step.t0 - 3 * unit_step.tau, unit_step.t0 + 3 * unit_step.tau, 20):
        side = Side.EARLIER if t <= unit_step.t0 else Side.LATER
        exact = wavefunction_at(unit_step, float(t), side)
        assert np.allclose(exact.as_array(), traj.at(float(t)).as_array(), rtol=0.0, atol=1e-8)


def test_coefficient_ratios_are_continuous_in_tau(unit_step):
    for tau in (0.0099, 0.01, 0.0101):
        config = unit_step.model_copy(update={'tau': tau})
        nudged = unit_step.model_copy(update={'tau': tau * (1.0 + 1e-7)})
        for value, moved in zip(coefficient_ratios(config), coefficient_ratios(nudged)):
            assert abs(value - moved) <= 1e-6
