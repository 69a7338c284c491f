"""Genus-2 surface as the quotient of the disk by the regular-octagon group.

The Dirichlet domain about 0 is the regular octagon with interior angles
pi/4.  Side midpoints sit at angles ``k pi / 4``; the generator ``g_k``
translates across the octagon along the ray at angle ``k pi / 4`` and maps
the side opposite to side ``k`` onto side ``k``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError
from .flow import PhaseState, Trajectory
from .hyperbolic import (
    EPS_BOUNDARY,
    MobiusTransform,
    as_complex,
    check_inside,
    distance,
    identity,
    mobius_apply,
    mobius_compose,
    mobius_distance,
    mobius_inverse,
    rotation,
    to_origin,
)

SQRT2 = math.sqrt(2.0)
#: cosh of half the translation length of every generator.
COSH_HALF_LENGTH = 1.0 + SQRT2
#: Relator of the opposite-side pairing, as (generator, exponent) letters.
RELATOR = ((0, 1), (1, -1), (2, 1), (3, -1), (0, -1), (1, 1), (2, -1), (3, 1))
RELATOR_TOL = 1e-10
MAX_REDUCE_STEPS = 1000


def _letter_index(k: int, e: int) -> int:
    return k if e > 0 else k + 4


def letter_name(index: int) -> str:
    k = index % 4
    return f"g{k}" if index < 4 else f"g{k}^-1"


@dataclass(frozen=True)
class FundamentalDomain:
    """Regular octagon; ``vertices[k]`` sits at angle ``(2k + 1) pi / 8``.

    Side ``k`` joins ``vertices[k - 1]`` and ``vertices[k]``; its partner is
    side ``(k + 4) % 8`` via generator letter ``side_pairings[k]``.
    """

    vertices: tuple
    side_pairings: dict
    inner_radius: float      # Euclidean distance of side midpoints
    outer_radius: float      # Euclidean distance of vertices

    def side(self, k: int) -> tuple[complex, complex]:
        return self.vertices[(k - 1) % 8], self.vertices[k % 8]


@dataclass(frozen=True)
class FuchsianGroup:
    generators: tuple                      # g0..g3
    relator_word: tuple = RELATOR
    domain: FundamentalDomain = field(default=None, compare=False)

    @cached_property
    def letters(self) -> tuple:
        """The 8 side pairings: g0..g3 then their inverses."""
        return tuple(self.generators) + tuple(mobius_inverse(g) for g in self.generators)

    @cached_property
    def kernel_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ga = np.array([m.a for m in self.letters], dtype=np.complex128)
        gb = np.array([m.b for m in self.letters], dtype=np.complex128)
        return ga, gb

    @property
    def r_inner(self) -> float:
        # points strictly inside the inscribed circle need no reduction test
        return self.domain.inner_radius * (1.0 - 1e-12)

    def word_transform(self, word) -> MobiusTransform:
        """Product of letters; ``word`` holds letter indices or (k, e) pairs.

        The result applies the rightmost letter first.
        """
        m = identity()
        for w in word:
            idx = _letter_index(*w) if isinstance(w, tuple) else int(w)
            m = mobius_compose(m, self.letters[idx])
        return m

    def relator_residual(self) -> float:
        return mobius_distance(self.word_transform(self.relator_word), identity())

    @cached_property
    def neighbours(self) -> tuple:
        """Group elements whose octagon touches the base octagon (identity first)."""
        R = 2.0 * math.atanh(self.domain.outer_radius)
        found = [identity()]
        frontier = [identity()]
        for _ in range(4):
            nxt = []
            for m in frontier:
                for g in self.letters:
                    cand = mobius_compose(m, g)
                    if distance(0j, mobius_apply(cand, 0j)) > 2 * R + 1e-9:
                        continue
                    if any(mobius_distance(cand, f) < 1e-9 for f in found):
                        continue
                    found.append(cand)
                    nxt.append(cand)
            frontier = nxt
        return tuple(found)


def _build_domain() -> FundamentalDomain:
    # inradius: cosh = cot(pi/8) = 1 + sqrt2; circumradius: cosh = cot(pi/8)^2
    rho_in = math.acosh(COSH_HALF_LENGTH)
    rho_out = math.acosh(COSH_HALF_LENGTH**2)
    rv = math.tanh(0.5 * rho_out)
    vertices = tuple(rv * cmath.exp(1j * (2 * k + 1) * math.pi / 8) for k in range(8))
    # side k -> (letter mapping its partner onto it, partner side)
    pairings = {k: (k, (k + 4) % 8) for k in range(8)}
    return FundamentalDomain(vertices, pairings, math.tanh(0.5 * rho_in), rv)


def genus2_octagon_group() -> FuchsianGroup:
    """Build and self-check the regular-octagon group."""
    a = COSH_HALF_LENGTH
    b = math.sqrt(a * a - 1.0)          # sqrt(2 + 2 sqrt2)
    T = MobiusTransform(a, b)
    gens = []
    for k in range(4):
        R = rotation(k * math.pi / 4)
        gens.append(mobius_compose(mobius_compose(R, T), mobius_inverse(R)))
    group = FuchsianGroup(tuple(gens), RELATOR, _build_domain())
    res = group.relator_residual()
    if res > RELATOR_TOL:
        raise NumericalError(f"relator residual {res} exceeds {RELATOR_TOL}")
    for g in gens:
        if abs(g.trace) <= 2.0:
            raise NumericalError("generator is not hyperbolic")
    return group


_DEFAULT_GROUP = None


def default_group() -> FuchsianGroup:
    global _DEFAULT_GROUP
    if _DEFAULT_GROUP is None:
        _DEFAULT_GROUP = genus2_octagon_group()
    return _DEFAULT_GROUP


def in_domain(z, group: FuchsianGroup, tol: float = 1e-12) -> bool:
    """Closed Dirichlet domain test: no side pairing brings ``z`` closer to 0."""
    z = as_complex(z)
    r = abs(z)
    if not r < 1.0 - EPS_BOUNDARY:
        return False
    return all(abs(mobius_apply(g, z)) >= r * (1.0 - tol) for g in group.letters)


@dataclass(frozen=True)
class Reduction:
    representative: complex
    word: tuple              # letter indices, first applied first
    transform: MobiusTransform

    @property
    def steps(self) -> int:
        return len(self.word)

    def word_names(self) -> list[str]:
        return [letter_name(i) for i in self.word]


def reduce(z, group: FuchsianGroup) -> Reduction:
    """Move ``z`` into the closed octagon by greedy descent.

    ``transform`` maps ``z`` to the representative; it equals the letters of
    ``word`` applied in order.
    """
    z = check_inside(as_complex(z))
    ga, gb = group.kernel_arrays
    word = np.full(MAX_REDUCE_STEPS, -1, dtype=np.int64)
    x, y, _, _, A, B, n = kernels.reduce_point(
        z.real, z.imag, 0.0, 0.0, ga, gb, group.r_inner, MAX_REDUCE_STEPS, word)
    if n < 0:
        raise NumericalError("reduction did not terminate")
    return Reduction(complex(x, y), tuple(int(w) for w in word[:n]), MobiusTransform(A, B))


def reduce_state(state: PhaseState, group: FuchsianGroup) -> tuple[PhaseState, MobiusTransform]:
    z, p = state.position, state.momentum
    ga, gb = group.kernel_arrays
    word = np.empty(0, dtype=np.int64)
    x, y, px, py, A, B, n = kernels.reduce_point(
        z.real, z.imag, p.real, p.imag, ga, gb, group.r_inner, MAX_REDUCE_STEPS, word)
    if n < 0:
        raise NumericalError("reduction did not terminate")
    return PhaseState(complex(x, y), complex(px, py)), MobiusTransform(A, B)


@dataclass(frozen=True)
class QuotientProjection:
    trajectory: Trajectory
    transforms: tuple        # (A, B) complex arrays of the reducing isometries
    steps: np.ndarray        # letters applied per sample


def project_trajectory(traj: Trajectory, group: FuchsianGroup) -> Trajectory:
    """Reduce every sample of a cover trajectory to the octagon."""
    return project_trajectory_detailed(traj, group).trajectory


def project_trajectory_detailed(traj: Trajectory, group: FuchsianGroup) -> QuotientProjection:
    ga, gb = group.kernel_arrays
    out, A, B, _, counts = kernels.reduce_many(
        np.ascontiguousarray(traj.states), ga, gb, group.r_inner, MAX_REDUCE_STEPS, 0)
    if np.any(counts < 0):
        raise NumericalError("reduction did not terminate")
    proj = Trajectory(traj.times.copy(), out, traj.step, traj.field)
    return QuotientProjection(proj, (A, B), counts)


def integrate_on_quotient(state: PhaseState, total_time: float, dt: float,
                          group: FuchsianGroup, s: float = 1.0, project: bool = False,
                          stride: int = 1) -> tuple[Trajectory, int]:
    """Integrate with a side-pairing jump whenever the orbit leaves the octagon.

    Returns the reduced trajectory and the number of letters applied.
    """
    from .flow import FieldStrength, _n_steps, energy

    nsteps = _n_steps(total_time, dt)
    ga, gb = group.kernel_arrays
    out, jumps = kernels.integrate_quotient(
        state.as_array(), float(dt), nsteps, float(s), int(stride), bool(project),
        energy(state), ga, gb, group.r_inner)
    times = np.arange(len(out)) * (dt * stride)
    return Trajectory(times, out, dt * stride, FieldStrength(s)), int(jumps)


def quotient_distance(z, w, group: FuchsianGroup) -> float:
    """Distance on the surface between two octagon points.

    Minimizes over the octagons adjacent to the base one, which is exact
    whenever the answer is smaller than the inradius of the octagon.
    """
    z, w = as_complex(z), as_complex(w)
    return min(distance(z, mobius_apply(g, w)) for g in group.neighbours)


def geodesic_point(u: complex, w: complex, t: float) -> complex:
    """Point at fraction ``t`` of the hyperbolic segment from ``u`` to ``w``."""
    m = to_origin(u)
    w0 = mobius_apply(m, w)
    r = abs(w0)
    if r == 0:
        return u
    p = math.tanh(t * math.atanh(r)) * w0 / r
    return mobius_apply(mobius_inverse(m), p)


def interior_angle(group: FuchsianGroup, k: int) -> float:
    """Angle of the octagon at ``vertices[k]``."""
    verts = group.domain.vertices
    v = verts[k]
    m = to_origin(v)
    prev = mobius_apply(m, verts[(k - 1) % 8])
    nxt = mobius_apply(m, verts[(k + 1) % 8])
    ang = abs(cmath.phase(nxt / prev))
    return ang


def side_match_error(group: FuchsianGroup, letter: int, samples: int = 33) -> float:
    """Hausdorff-type distance between ``letter`` applied to its source side and the target side."""
    dom = group.domain
    k = letter % 4
    target_side, source_side = (k, k + 4) if letter < 4 else (k + 4, k)
    su, sw = dom.side(source_side)
    tu, tw = dom.side(target_side)
    g = group.letters[letter]
    errs_fwd, errs_rev = [], []
    for t in np.linspace(0.0, 1.0, samples):
        img = mobius_apply(g, geodesic_point(su, sw, t))
        errs_fwd.append(distance(img, geodesic_point(tu, tw, t)))
        errs_rev.append(distance(img, geodesic_point(tw, tu, t)))
    return min(max(errs_fwd), max(errs_rev))


def _step_distances(z: np.ndarray) -> np.ndarray:
    num = np.abs(z[1:] - z[:-1])
    den = np.sqrt((1.0 - np.abs(z[1:]) ** 2) * (1.0 - np.abs(z[:-1]) ** 2))
    return 2.0 * np.arcsinh(num / den)


def seam_transitions(traj: Trajectory, group: FuchsianGroup, factor: float = 10.0) -> dict:
    """Side-pairing jumps of a reduced trajectory.

    Maps ``i`` to the group element carrying sample ``i + 1`` back next to
    sample ``i`` whenever the pair is far apart compared with a typical step.
    """
    z = traj.positions
    if len(z) < 2:
        return {}
    d = _step_distances(z)
    threshold = factor * max(float(np.median(d)), 1e-12)
    out = {}
    for i in np.nonzero(d > threshold)[0]:
        zi, zn = complex(z[i]), complex(z[i + 1])
        out[int(i)] = min(group.neighbours, key=lambda g: distance(zi, mobius_apply(g, zn)))
    return out


def _push_array(m: MobiusTransform, row: np.ndarray) -> np.ndarray:
    return np.array(kernels.apply_isometry(m.a, m.b, row[0], row[1], row[2], row[3]))


def quotient_curvature_profile(traj: Trajectory, group: FuchsianGroup, signed: bool = False,
                               ends: bool = False) -> np.ndarray:
    """Like :func:`magflow.flow.curvature_profile` but seam-aware.

    Neighbours of a sample that sit across a side pairing are mapped onto the
    sample's own sheet before differencing.
    """
    from .flow import curvature_core

    if len(traj) < 3:
        raise DomainError("need at least three samples")
    st = traj.states
    q = 1.0 - (st[:, 0] ** 2 + st[:, 1] ** 2)
    v = 0.25 * q * q * (st[:, 2] + 1j * st[:, 3])
    z = traj.positions
    v_prev = v[:-2].copy()
    v_next = v[2:].copy()

    def vel(row):
        qq = 1.0 - (row[0] ** 2 + row[1] ** 2)
        return 0.25 * qq * qq * complex(row[2], row[3])

    for i, T in seam_transitions(traj, group).items():
        # sample i + 1 seen from sample i, and sample i seen from i + 1
        if 1 <= i <= len(traj) - 2:
            v_next[i - 1] = vel(_push_array(T, st[i + 1]))
        if 1 <= i + 1 <= len(traj) - 2:
            v_prev[i] = vel(_push_array(mobius_inverse(T), st[i]))
    k = curvature_core(z[1:-1], v[1:-1], v_prev, v_next, traj.step, signed)
    if ends:
        k = np.concatenate([k[:1], k, k[-1:]])
    return k
