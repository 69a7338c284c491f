"""Integrals ``I_f(x, p) = f(centre)`` of the sub-critical flow.

Below the critical energy every orbit is a hyperbolic circle whose centre is
fixed by the flow, so any function of the centre is conserved.  On the
genus-2 surface ``f`` is evaluated on the octagon representative of the
centre, which makes it invariant under the group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .curves import CircleOrbit, _require_subcritical, circle_orbit, hyperbolic_center
from .errors import DomainError, NotFoundError, NumericalError, OutOfRegimeError
from .flow import PhaseState, Trajectory, energy
from .hyperbolic import EPS_BOUNDARY, distance_from_origin

#: Finite-difference step for Poisson brackets.
BRACKET_STEP = 1e-5


@dataclass(frozen=True)
class ObservableFunction:
    """Real function on the disk; with ``group`` set it lives on the surface."""

    func: Callable[[complex], float]
    name: str = "f"
    group: Optional[object] = None

    def __call__(self, z) -> float:
        z = complex(z)
        if self.group is not None:
            from .fuchsian import reduce

            z = reduce(z, self.group).representative
        return float(self.func(z))

    def on_surface(self, group) -> "ObservableFunction":
        return ObservableFunction(self.func, self.name, group)


def constant(c: float) -> ObservableFunction:
    return ObservableFunction(lambda z: c, f"const({c})")


def real_part() -> ObservableFunction:
    return ObservableFunction(lambda z: z.real, "re")


def imag_part() -> ObservableFunction:
    return ObservableFunction(lambda z: z.imag, "im")


def distance_to_origin() -> ObservableFunction:
    return ObservableFunction(distance_from_origin, "dist")


OBSERVABLES = {"re": real_part, "im": imag_part, "dist": distance_to_origin}


@dataclass(frozen=True)
class IntegralValue:
    value: float
    energy_level: float


def integral_I_f(state: PhaseState, f: ObservableFunction) -> float:
    E = energy(state)
    if E >= 0.5:
        raise OutOfRegimeError(f"E = {E} >= 1/2: no centre integral")
    return f(hyperbolic_center(state, E))


def integral_value(state: PhaseState, f: ObservableFunction) -> IntegralValue:
    return IntegralValue(integral_I_f(state, f), energy(state))


def phase_observable(f: ObservableFunction) -> Callable[[np.ndarray], float]:
    """``I_f`` as a function of the phase vector ``(x, y, p_x, p_y)``."""

    def I(u):
        return integral_I_f(PhaseState.from_array(u), f)

    return I


def hamiltonian(u) -> float:
    x, y, px, py = u
    q = 1.0 - (x * x + y * y)
    return 0.125 * q * q * (px * px + py * py)


def _gradient(F, u: np.ndarray, h: float) -> np.ndarray:
    g = np.empty(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        g[i] = (F(u + e) - F(u - e)) / (2.0 * h)
    return g


def poisson_bracket(F1, F2, state: PhaseState, h: float = BRACKET_STEP, s: float = 1.0) -> float:
    """Twisted bracket ``{F1, F2}`` by central differences.

    ``{x^i, p_j} = delta^i_j`` and ``{p_x, p_y} = s lam^2``.
    """
    u = state.as_array()
    if math.hypot(u[0], u[1]) + h >= 1.0 - EPS_BOUNDARY:
        raise DomainError("bracket stencil leaves the disk")
    g1 = _gradient(F1, u, h)
    g2 = _gradient(F2, u, h)
    lam2 = (2.0 / (1.0 - u[0] ** 2 - u[1] ** 2)) ** 2
    canonical = g1[0] * g2[2] + g1[1] * g2[3] - g1[2] * g2[0] - g1[3] * g2[1]
    magnetic = s * lam2 * (g1[2] * g2[3] - g1[3] * g2[2])
    return float(canonical + magnetic)


def independence_singular_values(f: ObservableFunction, g: ObservableFunction, points,
                                 h: float = 1e-6) -> np.ndarray:
    """Smallest singular value of the Jacobian of ``(f, g)`` at each point."""
    out = []
    for z in points:
        z = complex(z)
        J = np.array([
            [(f(z + h) - f(z - h)) / (2 * h), (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)],
            [(g(z + h) - g(z - h)) / (2 * h), (g(z + 1j * h) - g(z - 1j * h)) / (2 * h)],
        ])
        out.append(np.linalg.svd(J, compute_uv=False)[-1])
    return np.array(out)


# --- closed trajectories from two integrals --------------------------------

def _default_starts(group, n: int) -> list[complex]:
    if group is not None:
        from .fuchsian import in_domain

        R = group.domain.outer_radius
        xs = np.linspace(-R, R, n)
        return [complex(x, y) for y in xs for x in xs if in_domain(complex(x, y), group)]
    xs = np.linspace(-0.9, 0.9, n)
    return [complex(x, y) for y in xs for x in xs if abs(complex(x, y)) < 0.9]


def _newton(F, z0: complex, h: float = 1e-7, tol: float = 1e-13, max_iter: int = 60,
            inside=None) -> Optional[complex]:
    z = z0
    r = F(z)
    for _ in range(max_iter):
        nr = np.hypot(*r)
        if nr < tol:
            return z
        J = np.column_stack([(F(z + h) - F(z - h)) / (2 * h),
                             (F(z + 1j * h) - F(z - 1j * h)) / (2 * h)])
        if np.linalg.cond(J) > 1e12:
            return None
        d = np.linalg.solve(J, -r)
        step = complex(d[0], d[1])
        lam = 1.0
        while lam > 1e-4:
            zn = z + lam * step
            if abs(zn) < 1.0 - 1e-9 and (inside is None or inside(zn)):
                rn = F(zn)
                if np.hypot(*rn) < nr:
                    break
            lam *= 0.5
        else:
            return None
        z, r = zn, rn
    return z if np.hypot(*r) < 1e3 * tol else None


@dataclass(frozen=True)
class CentreSearch:
    roots: tuple          # distinct converged roots
    converged: int        # number of starts that converged
    spread: float         # max Euclidean distance between any root and roots[0] in its cluster


def find_centers(c_f: float, c_g: float, f: ObservableFunction, g: ObservableFunction,
                 group=None, grid: int = 32, cluster_tol: float = 1e-8) -> CentreSearch:
    """Multi-start damped Newton for ``f(z) = c_f, g(z) = c_g``.

    With a group, iterates are confined to the octagon and ``f, g`` are
    evaluated on the lifted (un-reduced) functions there.
    """
    inside = None
    if group is not None:
        from .fuchsian import in_domain

        def inside(z):
            return in_domain(z, group)

    def F(z):
        return np.array([f.func(z) - c_f, g.func(z) - c_g])

    roots: list[complex] = []
    spread = 0.0
    converged = 0
    for z0 in _default_starts(group, grid):
        z = _newton(F, z0, inside=inside)
        if z is None:
            continue
        converged += 1
        for r in roots:
            if abs(r - z) < 1e3 * cluster_tol:
                spread = max(spread, abs(r - z))
                break
        else:
            roots.append(z)
    return CentreSearch(tuple(roots), converged, spread)


def locate_closed_trajectory(c_f: float, c_g: float, f: ObservableFunction,
                             g: ObservableFunction, E: float, group=None,
                             grid: int = 32) -> CircleOrbit:
    """The closed orbit on level ``E`` whose centre has ``(f, g) = (c_f, c_g)``."""
    _require_subcritical(E)
    search = find_centers(c_f, c_g, f, g, group=group, grid=grid)
    if not search.roots:
        raise NotFoundError(f"no centre with f = {c_f}, g = {c_g} in the search region")
    z = search.roots[0]
    sv = independence_singular_values(f, g, [z])[0]
    if sv < 1e-6:
        raise NumericalError("f and g are degenerate at the root")
    return circle_orbit(z, E, 0.0)


# --- dependence on the energy ------------------------------------------------

def integral_energy_dependence(state_family: Callable[[float], PhaseState],
                               f: ObservableFunction, E_grid: Sequence[float]) -> np.ndarray:
    E_grid = np.asarray(E_grid, dtype=float)
    if np.any(E_grid >= 0.5) or np.any(E_grid <= 0):
        raise OutOfRegimeError("energy grid must lie in (0, 1/2)")
    return np.array([integral_I_f(state_family(E), f) for E in E_grid])


def spike_ratios(values, window: int = 21) -> np.ndarray:
    """``|second difference|`` over its rolling median.

    A jump in ``values`` shows up as a ratio far above 1; a smooth curve,
    even one whose curvature grows steadily, stays near 1.
    """
    d2 = np.abs(np.diff(np.asarray(values, dtype=float), 2))
    floor = 1e-12 * (1.0 + np.max(np.abs(values)))
    half = window // 2
    out = np.empty_like(d2)
    for i in range(len(d2)):
        lo, hi = max(0, i - half), min(len(d2), i + half + 1)
        out[i] = d2[i] / (np.median(d2[lo:hi]) + floor)
    return out


# --- conservation diagnostics -----------------------------------------------

@dataclass(frozen=True)
class ConservationReport:
    energy: float
    dt: float
    total_time: float
    observable: str
    center_drift: float       # max hyperbolic distance from the initial centre
    integral_drift: float     # max |I_f - I_f(0)| / (1 + |I_f(0)|)
    energy_drift: float


def conservation_report(traj: Trajectory, f: ObservableFunction, every: int = 1) -> ConservationReport:
    from .hyperbolic import distance

    E0 = float(traj.energies()[0])
    _require_subcritical(E0)
    idx = range(0, len(traj), every)
    c0 = hyperbolic_center(traj.state(0))
    I0 = f(c0)
    cd = 0.0
    idrift = 0.0
    for i in idx:
        c = hyperbolic_center(traj.state(i))
        cd = max(cd, distance(c0, c))
        idrift = max(idrift, abs(f(c) - I0) / (1.0 + abs(I0)))
    e = traj.energies()
    return ConservationReport(E0, traj.step, float(traj.times[-1]), f.name, cd, idrift,
                              float(np.max(np.abs(e - E0)) / E0))


def observed_order(dts, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(dt)``."""
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])
