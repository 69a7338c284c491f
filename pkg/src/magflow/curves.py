"""Curves of constant geodesic curvature and the exact sub-critical orbits.

On the curvature -1 disk a magnetic geodesic of energy ``E`` has geodesic
curvature ``1 / sqrt(2E)``.  Curvature 0, (0, 1), 1 and (1, inf) give
geodesics, hypercycles, horocycles and hyperbolic circles respectively.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError, OutOfRegimeError
from .flow import PhaseState, energy, state_from_velocity
from .hyperbolic import (
    MobiusTransform,
    as_complex,
    check_inside,
    mobius_apply,
    mobius_compose,
    mobius_inverse,
    rotation,
    translation,
)

#: ``|k_g - 1|`` below this is classified as a horocycle.
HOROCYCLE_TOL = 1e-9
#: Relative energy mismatch tolerated between a state and the requested level.
ENERGY_TOL = 1e-6
CRITICAL_ENERGY = 0.5


class CurveClass(enum.Enum):
    GEODESIC = "Geodesic"
    HYPERCYCLE = "Hypercycle"
    HOROCYCLE = "Horocycle"
    HYPERBOLIC_CIRCLE = "HyperbolicCircle"

    @property
    def boundary_contacts(self) -> int:
        return _CONTACTS[self]

    @property
    def tag(self) -> str:
        return self.value

    def __str__(self):
        return self.value


_CONTACTS = {
    CurveClass.GEODESIC: 2,
    CurveClass.HYPERCYCLE: 2,
    CurveClass.HOROCYCLE: 1,
    CurveClass.HYPERBOLIC_CIRCLE: 0,
}


def curvature_for_energy(E: float, s: float = 1.0) -> float:
    if not E > 0:
        raise DomainError("energy must be positive")
    return s / math.sqrt(2.0 * E)


def classify_by_curvature(k_g: float) -> CurveClass:
    if k_g < 0 or math.isnan(k_g):
        raise DomainError("geodesic curvature must be >= 0")
    if k_g < HOROCYCLE_TOL:
        return CurveClass.GEODESIC
    if abs(k_g - 1.0) < HOROCYCLE_TOL:
        return CurveClass.HOROCYCLE
    if k_g < 1.0:
        return CurveClass.HYPERCYCLE
    return CurveClass.HYPERBOLIC_CIRCLE


def classify_by_energy(E: float) -> CurveClass:
    return classify_by_curvature(curvature_for_energy(E))


def radius_for_energy(E: float) -> float:
    """Hyperbolic radius ``rho`` with ``coth(rho) = 1 / sqrt(2E)``."""
    _require_subcritical(E)
    return math.atanh(math.sqrt(2.0 * E))


def period_for_energy(E: float) -> float:
    return 2.0 * math.pi * math.sinh(radius_for_energy(E)) / math.sqrt(2.0 * E)


def _euclidean_half_radius(E: float) -> float:
    # tanh(rho / 2) with tanh(rho) = sqrt(2E)
    t = math.sqrt(2.0 * E)
    return t / (1.0 + math.sqrt(1.0 - t * t))


def _require_subcritical(E: float):
    if not E > 0:
        raise DomainError("energy must be positive")
    if E >= CRITICAL_ENERGY:
        raise OutOfRegimeError(
            f"E = {E} >= 1/2: magnetic geodesics are unbounded, no hyperbolic centre")


def _check_level(state: PhaseState, E: Optional[float]) -> float:
    e = energy(state)
    if E is None:
        return e
    if abs(e - E) > ENERGY_TOL * max(E, 1e-300):
        raise DomainError(f"state energy {e} does not match requested level {E}")
    return E


def normalizing_isometry(state: PhaseState) -> MobiusTransform:
    """Isometry ``m`` with ``m(0) = z`` and ``m'(0) > 0`` along the state's direction.

    Applying ``m^-1`` moves the state to the origin with velocity along +x.
    """
    v = state.velocity
    if v == 0:
        raise NumericalError("zero momentum: direction undefined")
    z = state.position
    # translation(z) has derivative (1 - |z|^2) > 0 at 0, so the direction
    # at the origin equals the direction of v
    return mobius_compose(translation(z), rotation(cmath.phase(v)))


def hyperbolic_center(state: PhaseState, E: Optional[float] = None) -> complex:
    """Centre of the hyperbolic circle traced by a sub-critical state."""
    E = _check_level(state, E)
    _require_subcritical(E)
    m = normalizing_isometry(state)
    return mobius_apply(m, kernels.ORIENTATION * 1j * _euclidean_half_radius(E))


@dataclass(frozen=True)
class CircleOrbit:
    center: complex
    hyp_radius: float
    energy: float
    period: float
    phase: float

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def euclidean_radius_at_origin(self) -> float:
        return math.tanh(0.5 * self.hyp_radius)


def circle_orbit(center, E: float, phase: float = 0.0) -> CircleOrbit:
    _require_subcritical(E)
    c = check_inside(as_complex(center))
    return CircleOrbit(c, radius_for_energy(E), E, period_for_energy(E), float(phase))


def orbit_state(orbit: CircleOrbit, t: float) -> PhaseState:
    """Exact state at time ``t``; clockwise around the centre."""
    r0 = orbit.euclidean_radius_at_origin
    omega = orbit.angular_frequency
    # reduce the angle first so that t and t + period give identical states
    turns = math.fmod(t / orbit.period, 1.0)
    theta = orbit.phase + kernels.ORIENTATION * 2.0 * math.pi * turns
    w = r0 * cmath.exp(1j * theta)
    wdot = kernels.ORIENTATION * 1j * omega * w
    local = state_from_velocity(w, wdot)
    return push_state(translation(orbit.center), local)


def orbit_positions(orbit: CircleOrbit, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    r0 = orbit.euclidean_radius_at_origin
    theta = orbit.phase + kernels.ORIENTATION * orbit.angular_frequency * times
    w = r0 * np.exp(1j * theta)
    m = translation(orbit.center)
    return (m.a * w + m.b) / (m.b.conjugate() * w + m.a.conjugate())


def push_state(m: MobiusTransform, state: PhaseState) -> PhaseState:
    """Image of a phase point under an isometry (momentum as a covector)."""
    z, p = state.position, state.momentum
    x, y, px, py = kernels.apply_isometry(m.a, m.b, z.real, z.imag, p.real, p.imag)
    return PhaseState(complex(x, y), complex(px, py))


# --- Euclidean picture ----------------------------------------------------

@dataclass(frozen=True)
class EuclideanCircle:
    """Euclidean circle (or diameter, ``center is None``) carrying an orbit."""

    center: Optional[complex]
    radius: float
    curve_class: CurveClass
    boundary_contacts: int
    line_direction: Optional[complex] = None

    @property
    def tangency_residual(self) -> float:
        """``| |c| + R - 1 |``; zero for horocycles."""
        if self.center is None:
            return math.inf
        return abs(abs(self.center) + self.radius - 1.0)

    @property
    def orthogonality_residual(self) -> float:
        """``| |c|^2 - R^2 - 1 |``; zero for circles meeting the unit circle at right angles."""
        if self.center is None:
            return 0.0
        return abs(abs(self.center) ** 2 - self.radius**2 - 1.0)


def _circle_matrix(center: complex, radius: float) -> np.ndarray:
    return np.array([[1.0, -center], [-center.conjugate(), abs(center) ** 2 - radius**2]],
                    dtype=complex)


def _transform_circle(m: MobiusTransform, H: np.ndarray) -> np.ndarray:
    minv = mobius_inverse(m).matrix
    return minv.conj().T @ H @ minv


def contacts_of(center: Optional[complex], radius: float, tol: float = HOROCYCLE_TOL) -> int:
    """Number of points a circle shares with the unit circle (lines through 0: 2)."""
    if center is None:
        return 2
    outer = abs(center) + radius
    if outer < 1.0 - tol:
        return 0
    if abs(outer - 1.0) <= tol:
        return 1
    return 2


def euclidean_representation(state: PhaseState, E: Optional[float] = None,
                             s: float = 1.0) -> EuclideanCircle:
    """The Euclidean circle containing the whole magnetic geodesic through ``state``.

    In the chart where the state sits at 0 moving along +x the orbit has
    Euclidean curvature ``2 k_g`` (the conformal factor is 2 and stationary
    there); it is transported back with the normalizing isometry.
    """
    E = _check_level(state, E)
    if not E > 0:
        raise DomainError("energy must be positive")
    k = curvature_for_energy(E, s) if s > 0 else 0.0
    cls = classify_by_curvature(k)
    m = normalizing_isometry(state)
    if k == 0.0:
        H = np.array([[0.0, 1j], [-1j, 0.0]])
    else:
        r = 1.0 / (2.0 * k)
        H = _circle_matrix(kernels.ORIENTATION * 1j * r, r)
    Hn = _transform_circle(m, H)
    A = Hn[0, 0].real
    scale = np.abs(Hn).max()
    if abs(A) <= 1e-14 * scale:
        # a line; the only lines among these curves are diameters
        B = Hn[0, 1]
        direction = 1j * B / abs(B)
        return EuclideanCircle(None, math.inf, cls, 2, direction)
    c = -Hn[0, 1] / A
    R2 = abs(c) ** 2 - Hn[1, 1].real / A
    R = math.sqrt(max(R2, 0.0))
    return EuclideanCircle(complex(c), R, cls, contacts_of(complex(c), R))


# --- circle fitting oracles ------------------------------------------------

def fit_circle(points) -> tuple[complex, float]:
    """Algebraic least-squares circle through complex ``points``."""
    pts = np.asarray(points, dtype=complex)
    x, y = pts.real, pts.imag
    # x^2 + y^2 + D x + E y + F = 0
    M = np.column_stack([x, y, np.ones_like(x)])
    rhs = -(x * x + y * y)
    (D, E, F), *_ = np.linalg.lstsq(M, rhs, rcond=None)
    c = complex(-D / 2, -E / 2)
    return c, math.sqrt(abs(c) ** 2 - F)


def hyperbolic_circle_from_euclidean(center: complex, radius: float) -> tuple[complex, float]:
    """Hyperbolic centre and radius of a Euclidean circle lying inside the disk."""
    if abs(center) + radius >= 1.0:
        raise DomainError("circle is not inside the disk")
    d = abs(center)
    u = center / d if d > 0 else 1.0 + 0j
    lo = 2.0 * math.atanh(d - radius)
    hi = 2.0 * math.atanh(d + radius)
    return u * math.tanh(0.25 * (lo + hi)), 0.5 * (hi - lo)
