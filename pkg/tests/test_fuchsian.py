import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magflow.curves import curvature_for_energy
from magflow.flow import integrate, relative_energy_drift, state_from_energy
from magflow.fuchsian import (
    default_group, in_domain, integrate_on_quotient, interior_angle, letter_name,
    project_trajectory, quotient_curvature_profile, quotient_distance, reduce, reduce_state,
    seam_transitions, side_match_error,
)
from magflow.hyperbolic import distance, mobius_apply, mobius_distance, identity

G = default_group()


def test_relator_is_identity():
    assert G.relator_residual() < 1e-10


def test_generators_are_hyperbolic_and_pair_sides():
    for g in G.generators:
        assert abs(g.trace) > 2
    for letter in range(8):
        assert side_match_error(G, letter) < 1e-10


def test_octagon_angles_sum_to_two_pi():
    total = sum(interior_angle(G, k) for k in range(8))
    assert total == pytest.approx(2 * math.pi, abs=1e-10)


def test_letter_names():
    assert letter_name(0) == "g0" and letter_name(4).startswith("g0")
    assert letter_name(4) != letter_name(0)


def test_domain_radii():
    dom = G.domain
    assert dom.outer_radius == pytest.approx(0.8408964152537145, rel=1e-12)
    assert dom.inner_radius == pytest.approx(math.tanh(0.5 * math.acosh(1 + math.sqrt(2))), rel=1e-14)
    assert in_domain(0j, G)
    # a vertex belongs to the closed octagon, a little beyond it does not
    assert in_domain(dom.vertices[0], G, tol=1e-9)
    assert not in_domain(dom.vertices[0] * 1.01, G)


def test_in_domain_inner_and_outer():
    assert in_domain(0.5 * G.domain.inner_radius, G)
    # just beyond a side midpoint
    mid = G.domain.inner_radius * cmath.exp(0j)
    assert not in_domain(mid * 1.01, G)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 0.999), st.floats(-math.pi, math.pi))
def test_reduce_lands_in_domain_and_is_idempotent(r, t):
    z = r * cmath.exp(1j * t)
    red = reduce(z, G)
    assert in_domain(red.representative, G, tol=1e-9)
    assert red.steps < 200
    assert abs(mobius_apply(red.transform, z) - red.representative) < 1e-9
    again = reduce(red.representative, G)
    assert abs(again.representative - red.representative) < 1e-12


def test_reduce_word_reproduces_transform():
    red = reduce(0.97 * cmath.exp(0.3j), G)
    m = identity()
    for w in red.word:
        m = G.letters[w] @ m
    assert mobius_distance(m, red.transform) < 1e-8 * (abs(m.a) + abs(m.b))


def test_neighbours_surround_the_octagon():
    assert len(G.neighbours) == 49
    # a point just across a side is close to its reduced image on the surface
    z_in = G.domain.inner_radius * 0.99
    z_out = G.domain.inner_radius * 1.01
    rep = reduce(z_out, G).representative
    assert abs(rep) > 0.9 * G.domain.inner_radius
    assert quotient_distance(rep, rep, G) == 0.0
    assert quotient_distance(z_in, rep, G) == pytest.approx(distance(z_in, z_out), rel=1e-9)


def test_projected_trajectory_is_seam_continuous():
    s0 = state_from_energy(0.5, 0.1 + 0.05j, 0.3)
    traj = integrate(s0, 8.0, 1e-3)
    proj = project_trajectory(traj, G)
    z = proj.positions
    jumps = seam_transitions(proj, G)
    assert jumps
    for i, T in jumps.items():
        across = mobius_apply(T, complex(z[i + 1]))
        step = distance(complex(z[i]), across)
        # hyperbolic step length is sqrt(2E) dt
        assert abs(step - math.sqrt(2 * 0.5) * 1e-3) < 1e-9


@pytest.mark.parametrize("E", [0.5, 2.0])
def test_quotient_integration_conserves_energy(E):
    s0, _ = reduce_state(state_from_energy(E, 0.1 + 0.05j, 0.3), G)
    traj, jumps = integrate_on_quotient(s0, 50.0, 1e-3, G)
    assert jumps > 0
    assert relative_energy_drift(traj) < 1e-9
    assert np.all(np.abs(traj.positions) < G.domain.outer_radius + 1e-9)


def test_quotient_curvature_is_smooth_across_seams():
    E = 2.0
    s0, _ = reduce_state(state_from_energy(E, 0.1 + 0.05j, 0.3), G)
    traj, _ = integrate_on_quotient(s0, 20.0, 1e-3, G)
    k = quotient_curvature_profile(traj, G)
    assert np.max(np.abs(k - curvature_for_energy(E))) < 1e-5
