"""Magnetic geodesic flow on the disk in Lorentz-force form.

Hamiltonian ``H = |p|^2 / (2 lam^2)`` with the twisted bracket
``{x^i, p_j} = delta^i_j``, ``{p_1, p_2} = F_12 = s lam^2``.  Hamilton's
equations read

    xdot = p / lam^2
    pdot = -grad H + s * (p_y, -p_x)

No vector potential appears anywhere: only the field strength enters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .errors import BoundaryError, DomainError, NumericalError
from .hyperbolic import as_complex, check_inside, conformal_factor

#: Default time step for hyperbolic speeds up to 2.
DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class FieldStrength:
    """Magnetic field ``F = s * dmu``; the physical flow has ``s = 1``."""

    s: float = 1.0

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise DomainError("field strength must be finite and >= 0")


UNIT_FIELD = FieldStrength(1.0)
NO_FIELD = FieldStrength(0.0)


@dataclass(frozen=True)
class PhaseState:
    """Disk position ``z`` and covector momentum ``p = p_x + i p_y``."""

    position: complex
    momentum: complex

    def __post_init__(self):
        z = complex(as_complex(self.position))
        p = complex(self.momentum)
        check_inside(z)
        if not (math.isfinite(p.real) and math.isfinite(p.imag)):
            raise DomainError("momentum must be finite")
        object.__setattr__(self, "position", z)
        object.__setattr__(self, "momentum", p)

    def as_array(self) -> np.ndarray:
        z, p = self.position, self.momentum
        return np.array([z.real, z.imag, p.real, p.imag])

    @classmethod
    def from_array(cls, arr) -> "PhaseState":
        return cls(complex(arr[0], arr[1]), complex(arr[2], arr[3]))

    @property
    def velocity(self) -> complex:
        return self.momentum / conformal_factor(self.position) ** 2


def state_from_velocity(z, v) -> PhaseState:
    """Build a state from a Euclidean-chart velocity via ``p = lam^2 v``."""
    z = as_complex(z)
    return PhaseState(z, conformal_factor(z) ** 2 * complex(v))


def state_from_energy(E: float, z=0j, angle: float = 0.0) -> PhaseState:
    """State at ``z`` on energy level ``E`` moving in Euclidean direction ``angle``."""
    if E < 0:
        raise DomainError("energy must be >= 0")
    z = as_complex(z)
    lam = conformal_factor(z)
    return PhaseState(z, lam * math.sqrt(2.0 * E) * complex(math.cos(angle), math.sin(angle)))


def energy(state: PhaseState) -> float:
    z, p = state.position, state.momentum
    return kernels.energy(z.real, z.imag, p.real, p.imag)


def energy_from_velocity(state: PhaseState) -> float:
    lam = conformal_factor(state.position)
    return 0.5 * lam**2 * abs(state.velocity) ** 2


def hyperbolic_speed(state: PhaseState) -> float:
    return math.sqrt(2.0 * energy(state))


def default_dt(speed: float) -> float:
    """1e-3 up to speed 2, halved for every doubling beyond."""
    if speed <= 2.0:
        return DEFAULT_DT
    return DEFAULT_DT / 2.0 ** math.ceil(math.log2(speed / 2.0))


def vector_field(state: PhaseState, field: FieldStrength = UNIT_FIELD) -> np.ndarray:
    """``(xdot, ydot, pdot_x, pdot_y)`` at ``state``."""
    z, p = state.position, state.momentum
    if abs(z) >= 1.0 - 1e-12:
        raise BoundaryError("state too close to the boundary")
    return np.array(kernels.rhs(z.real, z.imag, p.real, p.imag, field.s))


def step(state: PhaseState, dt: float, field: FieldStrength = UNIT_FIELD,
         project: bool = False) -> PhaseState:
    """One classical RK4 step; ``project`` restores the initial energy exactly."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    z, p = state.position, state.momentum
    x, y, px, py = kernels.rk4(z.real, z.imag, p.real, p.imag, dt, field.s)
    if project:
        px, py = kernels.project_energy(x, y, px, py, energy(state))
    if not (x * x + y * y < (1.0 - 1e-12) ** 2):
        raise BoundaryError("trajectory escaped to the boundary shell")
    return PhaseState(complex(x, y), complex(px, py))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled orbit; ``states`` rows are ``(x, y, p_x, p_y)``."""

    times: np.ndarray
    states: np.ndarray
    step: float
    field: FieldStrength = dc_field(default=UNIT_FIELD)

    def __len__(self):
        return len(self.times)

    def state(self, i: int) -> PhaseState:
        return PhaseState.from_array(self.states[i])

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, 0] + 1j * self.states[:, 1]

    @property
    def momenta(self) -> np.ndarray:
        return self.states[:, 2] + 1j * self.states[:, 3]

    def energies(self) -> np.ndarray:
        x, y, px, py = self.states.T
        q = 1.0 - (x * x + y * y)
        return 0.125 * q * q * (px * px + py * py)

    def velocities(self) -> np.ndarray:
        x, y = self.states[:, 0], self.states[:, 1]
        q = 1.0 - (x * x + y * y)
        return 0.25 * q * q * self.momenta

    def speeds(self) -> np.ndarray:
        """Hyperbolic speed ``lam |v|`` of every sample."""
        z = self.positions
        return 2.0 / (1.0 - np.abs(z) ** 2) * np.abs(self.velocities())


def _n_steps(total_time: float, dt: float) -> int:
    if not total_time > 0:
        raise DomainError("total_time must be positive")
    if not dt > 0:
        raise DomainError("dt must be positive")
    if dt > total_time * (1 + 1e-12):
        raise DomainError("dt must not exceed total_time")
    return max(1, int(round(total_time / dt)))


def integrate(state: PhaseState, total_time: float, dt: float = DEFAULT_DT,
              field: FieldStrength = UNIT_FIELD, project: bool = False,
              stride: int = 1) -> Trajectory:
    """Integrate on the disk with a fixed step, keeping every ``stride``-th sample."""
    nsteps = _n_steps(total_time, dt)
    if stride < 1:
        raise DomainError("stride must be >= 1")
    y0 = state.as_array()
    out, n_valid = kernels.integrate(y0, float(dt), nsteps, float(field.s), int(stride),
                                     bool(project), energy(state))
    if n_valid < len(out):
        raise BoundaryError(
            f"trajectory reached the boundary shell after {n_valid - 1} stored samples")
    times = np.arange(len(out)) * (dt * stride)
    return Trajectory(times, out, dt * stride, field)


def _covariant_cross(v: np.ndarray, a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``v x (a + Gamma(v, v))`` for the conformal metric; tangential terms drop out."""
    grad_log_lam = 2.0 * z / (1.0 - np.abs(z) ** 2)
    cross_va = (v.conjugate() * a).imag
    cross_vg = (v.conjugate() * grad_log_lam).imag
    return cross_va - np.abs(v) ** 2 * cross_vg


def curvature_core(z: np.ndarray, v: np.ndarray, v_prev: np.ndarray, v_next: np.ndarray,
                   dt: float, signed: bool = False) -> np.ndarray:
    """Geodesic curvature from velocities at ``t - dt``, ``t``, ``t + dt``."""
    speed = np.abs(v)
    if np.any(speed == 0):
        raise NumericalError("zero speed: geodesic curvature undefined")
    a = (v_next - v_prev) / (2.0 * dt)
    lam = 2.0 / (1.0 - np.abs(z) ** 2)
    k = _covariant_cross(v, a, z) / (lam * speed**3)
    return k if signed else np.abs(k)


def curvature_profile(traj: Trajectory, signed: bool = False, ends: bool = False) -> np.ndarray:
    """Geodesic curvature at every interior sample (central differences).

    Velocity comes from the stored momenta; acceleration is its central
    difference.  Clockwise turning gives a negative signed curvature.  With
    ``ends=True`` the result has one entry per sample, the two end samples
    repeating their neighbours.
    """
    if len(traj) < 3:
        raise DomainError("need at least three samples")
    z = traj.positions
    v = traj.velocities()
    k = curvature_core(z[1:-1], v[1:-1], v[:-2], v[2:], traj.step, signed)
    if ends:
        k = np.concatenate([k[:1], k, k[-1:]])
    return k


def geodesic_curvature(traj: Trajectory, index: int, signed: bool = False) -> float:
    if not 1 <= index <= len(traj) - 2:
        raise DomainError("index must leave room for central differences")
    z = traj.positions[index:index + 1]
    v = traj.velocities()[index - 1:index + 2]
    return float(curvature_core(z, v[1:2], v[0:1], v[2:3], traj.step, signed)[0])


def relative_energy_drift(traj: Trajectory) -> float:
    e = traj.energies()
    return float(np.max(np.abs(e - e[0])) / e[0])
