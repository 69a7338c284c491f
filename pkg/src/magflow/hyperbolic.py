"""Poincare disk model with curvature -1 and its isometry group SU(1,1)/+-1.

The metric is ``lam(z)**2 (dx**2 + dy**2)`` with ``lam(z) = 2 / (1 - |z|**2)``.
Points are plain Python complex numbers; :class:`DiskPoint` is a thin checked
wrapper for callers that want the invariant enforced at construction.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryError, DomainError, NumericalError

#: Points with ``|z| >= 1 - EPS_BOUNDARY`` are rejected.
EPS_BOUNDARY = 1e-12
#: Allowed relative residual of ``|a|^2 - |b|^2 = 1`` when validating transforms.
DET_TOL = 1e-9


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        check_inside(complex(self.re, self.im))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)

    def __complex__(self):
        return self.z


def as_complex(z) -> complex:
    """Accept a complex, a real, a ``DiskPoint`` or an ``(re, im)`` pair."""
    if isinstance(z, DiskPoint):
        return z.z
    if isinstance(z, (tuple, list, np.ndarray)) and len(z) == 2:
        return complex(float(z[0]), float(z[1]))
    return complex(z)


def check_inside(z: complex) -> complex:
    if not (abs(z) < 1.0 - EPS_BOUNDARY):
        raise BoundaryError(f"point {z!r} is not strictly inside the unit disk")
    return z


@dataclass(frozen=True)
class MetricData:
    position: complex
    conformal_factor: float


def conformal_factor(z) -> float:
    z = check_inside(as_complex(z))
    return 2.0 / (1.0 - abs(z) ** 2)


def metric_data(z) -> MetricData:
    z = as_complex(z)
    return MetricData(position=z, conformal_factor=conformal_factor(z))


def distance(z, w) -> float:
    """Hyperbolic distance; the asinh form stays accurate for nearby points."""
    z = check_inside(as_complex(z))
    w = check_inside(as_complex(w))
    num = abs(z - w)
    den = math.sqrt((1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2))
    return 2.0 * math.asinh(num / den)


def distance_from_origin(z) -> float:
    return 2.0 * math.atanh(abs(check_inside(as_complex(z))))


@dataclass(frozen=True)
class MobiusTransform:
    """Element of SU(1,1) with matrix ``[[a, b], [conj(b), conj(a)]]``.

    Instances compare with :func:`mobius_equal`, which ignores the overall sign.
    """

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        scale = abs(a) ** 2 + abs(b) ** 2
        if not math.isfinite(scale) or abs(determinant(self) - 1.0) > DET_TOL * scale:
            raise DomainError(f"({a}, {b}) violates |a|^2 - |b|^2 = 1")

    def __call__(self, z):
        return mobius_apply(self, z)

    def __matmul__(self, other: "MobiusTransform") -> "MobiusTransform":
        return mobius_compose(self, other)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    @property
    def trace(self) -> float:
        return 2.0 * self.a.real

    def derivative(self, z) -> complex:
        """Complex derivative of the action at ``z``."""
        z = as_complex(z)
        return 1.0 / (self.b.conjugate() * z + self.a.conjugate()) ** 2


def determinant(m: MobiusTransform) -> float:
    return abs(m.a) ** 2 - abs(m.b) ** 2


def _normalized(a: complex, b: complex) -> MobiusTransform:
    det = abs(a) ** 2 - abs(b) ** 2
    if det <= 0.0:
        raise NumericalError("matrix left SU(1,1); cannot renormalize")
    s = math.sqrt(det)
    return MobiusTransform(a / s, b / s)


def identity() -> MobiusTransform:
    return MobiusTransform(1.0, 0.0)


def rotation(theta: float) -> MobiusTransform:
    """Rotation ``z -> exp(i theta) z`` about the origin."""
    return MobiusTransform(cmath.exp(0.5j * theta), 0.0)


def translation(c) -> MobiusTransform:
    """The transvection sending 0 to ``c`` along the geodesic through them."""
    c = check_inside(as_complex(c))
    s = 1.0 / math.sqrt(1.0 - abs(c) ** 2)
    return MobiusTransform(s, c * s)


def to_origin(z) -> MobiusTransform:
    """Transvection sending ``z`` to 0 (inverse of :func:`translation`)."""
    return mobius_inverse(translation(z))


def from_matrix(mat) -> MobiusTransform:
    mat = np.asarray(mat, dtype=complex)
    return _normalized(mat[0, 0], mat[0, 1])


def mobius_apply(m: MobiusTransform, z):
    z = check_inside(as_complex(z))
    den = m.b.conjugate() * z + m.a.conjugate()
    if abs(den) < 1e-300:
        raise NumericalError("vanishing denominator; transform is not in SU(1,1)")
    return (m.a * z + m.b) / den


def mobius_compose(m1: MobiusTransform, m2: MobiusTransform) -> MobiusTransform:
    """``m1 o m2`` as a matrix product, renormalized onto SU(1,1)."""
    a = m1.a * m2.a + m1.b * m2.b.conjugate()
    b = m1.a * m2.b + m1.b * m2.a.conjugate()
    return _normalized(a, b)


def mobius_inverse(m: MobiusTransform) -> MobiusTransform:
    return MobiusTransform(m.a.conjugate(), -m.b)


def mobius_equal(m1: MobiusTransform, m2: MobiusTransform, tol: float = 1e-12) -> bool:
    """Equality in SU(1,1)/+-1."""
    d_plus = max(abs(m1.a - m2.a), abs(m1.b - m2.b))
    d_minus = max(abs(m1.a + m2.a), abs(m1.b + m2.b))
    return min(d_plus, d_minus) <= tol


def mobius_distance(m1: MobiusTransform, m2: MobiusTransform) -> float:
    """Matrix max-norm distance modulo sign."""
    d_plus = max(abs(m1.a - m2.a), abs(m1.b - m2.b))
    d_minus = max(abs(m1.a + m2.a), abs(m1.b + m2.b))
    return min(d_plus, d_minus)


def random_mobius(rng: np.random.Generator, max_shift: float = 0.9) -> MobiusTransform:
    """Rotation composed with a translation to a random point with ``|c| < max_shift``."""
    r = max_shift * math.sqrt(rng.uniform())
    c = r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return mobius_compose(translation(c), rotation(rng.uniform(0, 2 * math.pi)))


def random_disk_point(rng: np.random.Generator, max_radius: float = 0.95) -> complex:
    r = max_radius * math.sqrt(rng.uniform())
    return r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def log_conformal_factor(x: float, y: float) -> float:
    return math.log(2.0) - math.log1p(-(x * x + y * y))


def gaussian_curvature_check(z, h: float = 1e-3) -> float:
    """Finite-difference curvature ``-Laplacian(log lam) / lam**2`` at ``z``.

    Uses the 5-point Laplacian with one Richardson step (h and 2h stencils),
    so the truncation error is O(h**4).
    """
    z = as_complex(z)
    if h <= 0:
        raise DomainError("h must be positive")
    if abs(z) + 4 * h >= 1.0 - EPS_BOUNDARY:
        raise DomainError("finite-difference stencil leaves the disk")
    x, y = z.real, z.imag

    def laplacian(step):
        c = log_conformal_factor(x, y)
        return (
            log_conformal_factor(x + step, y)
            + log_conformal_factor(x - step, y)
            + log_conformal_factor(x, y + step)
            + log_conformal_factor(x, y - step)
            - 4.0 * c
        ) / step**2

    lap = (4.0 * laplacian(h) - laplacian(2 * h)) / 3.0
    lam = conformal_factor(z)
    return -lap / lam**2
