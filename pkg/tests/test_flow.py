import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magflow.errors import BoundaryError, DomainError
from magflow.flow import (
    NO_FIELD, FieldStrength, PhaseState, curvature_profile, default_dt, energy,
    energy_from_velocity, geodesic_curvature, hyperbolic_speed, integrate,
    relative_energy_drift, state_from_energy, state_from_velocity, step, vector_field,
)


def test_energy_ignores_field():
    st_ = state_from_energy(0.3, 0.2 - 0.1j, 1.0)
    assert energy(st_) == pytest.approx(0.3, rel=1e-14)
    assert energy_from_velocity(st_) == pytest.approx(0.3, rel=1e-14)
    assert hyperbolic_speed(st_) == pytest.approx(math.sqrt(0.6), rel=1e-14)


def test_state_from_velocity_at_origin():
    s = state_from_velocity(0j, 0.5)
    assert s.momentum == 2.0
    assert energy(s) == pytest.approx(0.5)


def test_field_strength_validation():
    with pytest.raises(DomainError):
        FieldStrength(-1.0)


def test_force_points_to_the_right_of_motion():
    # at the origin moving along +x the Lorentz term pulls towards -y
    f = vector_field(state_from_velocity(0j, 1.0))
    assert f[0] > 0 and f[3] < 0 and abs(f[2]) < 1e-15


def test_default_dt_scaling():
    assert default_dt(1.0) == 1e-3
    assert default_dt(2.0) == 1e-3
    assert default_dt(4.0) == 5e-4
    assert default_dt(7.9) == 2.5e-4


def test_step_and_integrate_agree():
    s0 = state_from_energy(0.125, 0.1, 0.4)
    manual = s0
    for _ in range(50):
        manual = step(manual, 1e-3)
    traj = integrate(s0, 0.05, 1e-3)
    assert np.allclose(traj.states[-1], manual.as_array(), atol=1e-14)


def test_stride_subsamples():
    s0 = state_from_energy(0.125)
    full = integrate(s0, 1.0, 1e-3)
    sub = integrate(s0, 1.0, 1e-3, stride=10)
    assert len(sub) == 101
    assert np.allclose(sub.states, full.states[::10], atol=1e-15)
    assert sub.step == pytest.approx(1e-2)


@pytest.mark.parametrize("E", [0.05, 0.125, 0.3, 0.45])
def test_energy_conservation(E):
    traj = integrate(state_from_energy(E, 0.1 + 0.05j, 0.3), 20.0)
    assert relative_energy_drift(traj) < 1e-10


def test_energy_conservation_unbounded_orbit_short_run():
    # on the cover an E = 2 orbit heads for the boundary; keep the run short
    traj = integrate(state_from_energy(2.0, 0.1 + 0.05j, 0.3), 3.0)
    assert relative_energy_drift(traj) < 1e-10


def test_projection_holds_energy_exactly():
    s0 = state_from_energy(2.0, 0.0, 0.0)
    traj = integrate(s0, 5.0, 5e-3, project=True)
    assert relative_energy_drift(traj) < 1e-14


def test_integrate_preconditions():
    s0 = state_from_energy(0.125)
    with pytest.raises(DomainError):
        integrate(s0, 0.0)
    with pytest.raises(DomainError):
        integrate(s0, 1.0, dt=-1e-3)
    with pytest.raises(DomainError):
        integrate(s0, 1e-3, dt=1e-2)


def test_escape_is_reported():
    # a geodesic with no field runs to the boundary in finite Euclidean time
    s0 = state_from_energy(2.0)
    with pytest.raises(BoundaryError):
        integrate(s0, 40.0, 1e-2, field=NO_FIELD)


def test_phase_state_checks():
    with pytest.raises(BoundaryError):
        PhaseState(1.0 + 0j, 0j)
    with pytest.raises(DomainError):
        PhaseState(0j, complex(float("inf"), 0))


def test_geodesics_have_zero_curvature():
    traj = integrate(state_from_energy(0.5, 0.2j, 1.0), 2.0, 1e-3, field=NO_FIELD)
    assert np.max(curvature_profile(traj)) < 1e-7


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.0, 0.6), st.floats(-math.pi, math.pi))
def test_curvature_law_property(E, r, theta):
    z = r * complex(math.cos(theta), math.sin(theta))
    traj = integrate(state_from_energy(E, z, theta + 1.0), 0.2, default_dt(math.sqrt(2 * E)))
    k = curvature_profile(traj, signed=True)
    assert np.allclose(k, -1.0 / math.sqrt(2 * E), rtol=1e-5)


def test_curvature_ends_and_index():
    traj = integrate(state_from_energy(0.125), 0.1, 1e-3)
    k = curvature_profile(traj, ends=True)
    assert len(k) == len(traj)
    assert k[0] == k[1] and k[-1] == k[-2]
    assert geodesic_curvature(traj, 5) == pytest.approx(k[5], rel=1e-12)
    with pytest.raises(DomainError):
        geodesic_curvature(traj, 0)
