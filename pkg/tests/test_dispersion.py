import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_steps.core.dispersion import (
    FREE,
    KinematicState,
    PotentialPoint,
    energy_from_momentum,
    group_velocity,
    momentum_from_energy,
    phase_velocity,
    scalar_temporal_transition,
    spatial_velocity_report,
    temporal_transition,
    temporal_velocity_report,
)
from dirac_steps.core.errors import DomainError
from dirac_steps.models.schemas import NaturalUnits

SQRT3 = math.sqrt(3.0)

finite = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)
masses = st.floats(min_value=0.1, max_value=5.0)


def test_energy_from_momentum():
    assert energy_from_momentum(0.75, FREE, 1.0) == pytest.approx(1.25)
    assert energy_from_momentum(0.75, FREE, 1.0, branch=-1) == pytest.approx(-1.25)
    assert energy_from_momentum(1.0, PotentialPoint(v=0.5, a=1.0), 1.0) == pytest.approx(1.5)


def test_momentum_from_energy_propagating_and_evanescent():
    assert momentum_from_energy(2.0, FREE, 1.0) == pytest.approx(complex(SQRT3, 0.0))
    assert momentum_from_energy(2.0, FREE, 1.0, branch=-1) == pytest.approx(complex(-SQRT3, 0.0))
    for branch in (1, -1):
        evanescent = momentum_from_energy(0.5, PotentialPoint(a=0.3), 1.0, branch)
        assert evanescent.real == pytest.approx(0.3)
        assert evanescent.imag == pytest.approx(math.sqrt(0.75))


def test_invalid_branch_and_mass():
    with pytest.raises(DomainError):
        energy_from_momentum(1.0, FREE, 1.0, branch=0)
    with pytest.raises(DomainError):
        momentum_from_energy(2.0, FREE, 0.0)
    with pytest.raises(DomainError):
        PotentialPoint(v=math.inf)


@settings(max_examples=200)
@given(p=finite, v=finite, a=finite, mass=masses, branch=st.sampled_from([1, -1]))
def test_on_shell_states_satisfy_dispersion(p, v, a, mass, branch):
    pot = PotentialPoint(v=v, a=a)
    state = KinematicState.on_shell(p, pot, mass, branch)
    assert state.is_on_shell(pot, mass)
    assert abs(group_velocity(state, pot, mass)) < 1.0


def test_temporal_transition():
    assert temporal_transition(2.0, 0.0, 1.0) == pytest.approx((2.0, -2.0))
    # the kinetic momentum vanishes after the step
    assert temporal_transition(2.0, SQRT3, 1.0) == pytest.approx((1.0, -1.0))
    with pytest.raises(DomainError):
        temporal_transition(0.5, 1.0, 1.0)


def test_scalar_temporal_transition():
    assert scalar_temporal_transition(2.0, 0.0, 0.5) == pytest.approx((2.5, -1.5))


def test_phase_velocity_at_rest_raises():
    with pytest.raises(ZeroDivisionError):
        phase_velocity(KinematicState(1.0, 0.0))


def test_temporal_velocity_report_has_opposite_group_velocities():
    report = temporal_velocity_report(2.0, 0.0, 1.0, 1.0)
    assert report['incident']['group'] == pytest.approx(SQRT3 / 2.0)
    assert report['forward']['group'] == pytest.approx(-report['backward']['group'])
    assert report['forward']['phase'] == pytest.approx(-report['backward']['phase'])


def test_spatial_velocity_report_regions():
    gap = spatial_velocity_report(2.0, 0.0, 2.0, 1.0)
    assert gap['transmitted'] == {'phase': math.inf, 'group': 0.0}

    klein = spatial_velocity_report(2.0, 0.0, 4.0, 1.0)
    # negative momentum and negative kinetic energy: the wave still moves forward
    assert klein['transmitted']['group'] == pytest.approx(SQRT3 / 2.0)
    assert klein['reflected']['group'] == pytest.approx(-SQRT3 / 2.0)

    with pytest.raises(DomainError):
        spatial_velocity_report(0.5, 0.0, 0.0, 1.0)


@settings(max_examples=200)
@given(p=finite, v=finite, a=finite, mass=masses, branch=st.sampled_from([1, -1]))
def test_momentum_recovered_from_energy(p, v, a, mass, branch):
    pot = PotentialPoint(v=v, a=a)
    energy = energy_from_momentum(p, pot, mass, branch)
    direction = 1 if p >= a else -1
    recovered = momentum_from_energy(energy, pot, mass, direction)
    # at p = qA the radicand may round to either side of zero
    assert abs(recovered - p) <= 1e-6


@settings(max_examples=100)
@given(p=st.floats(min_value=0.01, max_value=20.0), mass=masses)
def test_free_velocities_multiply_to_one(p, mass):
    state = KinematicState.on_shell(p, FREE, mass)
    assert phase_velocity(state) * group_velocity(state, FREE, mass) == pytest.approx(1.0, rel=1e-12)


def test_vector_step_slows_the_forward_wave():
    rng = np.random.default_rng(7)
    for _ in range(100):
        e_i = rng.uniform(1.05, 6.0)
        p_i = math.sqrt(e_i * e_i - 1.0)
        qa2 = rng.uniform(0.01, 0.99) * p_i
        report = temporal_velocity_report(e_i, 0.0, qa2, 1.0)
        assert report['forward']['group'] < report['incident']['group']
        assert report['forward']['phase'] < report['incident']['phase']


def test_raw_potentials_couple_to_negative_charge():
    units = NaturalUnits()
    assert units.charge < 0
    assert units.charge ** 2 == pytest.approx(4.0 * math.pi / 137.035999084)
    pot = PotentialPoint.from_potentials(2.0, 0.5)
    assert pot.v == pytest.approx(2.0 * units.charge)
    assert pot.a == pytest.approx(0.5 * units.charge)
    assert pot.v < 0 and pot.a < 0
    # an attractive V for the electron lowers the energy of a state at rest
    assert energy_from_momentum(pot.a, pot, 1.0) == pytest.approx(1.0 + pot.v)
    heavy = PotentialPoint.from_potentials(1.0, 0.0, NaturalUnits(mass=2.0, charge=-1.0))
    assert heavy.v == -1.0
