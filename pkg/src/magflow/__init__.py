"""Magnetic geodesic flow on the Poincare disk and a genus-2 surface.

Below the critical energy 1/2 every orbit is a hyperbolic circle and the
flow is integrable; at and above it the flow on the compact surface mixes.
"""
from ._accel import NUMBA_ENABLED, backend_name
from .chaos import (COVERAGE_REGRESSION_TIME, CoverageReport, LyapunovEstimate, coverage,
                    format_report, lyapunov_reference, lyapunov_top, regime_report)
from .curves import (CurveClass, CircleOrbit, EuclideanCircle, circle_orbit, classify_by_curvature,
                     classify_by_energy, curvature_for_energy, euclidean_representation,
                     hyperbolic_center, orbit_state, period_for_energy, radius_for_energy)
from .errors import (BoundaryError, DomainError, InsufficientDataError, MagflowError,
                     NotFoundError, NumericalError, OutOfRegimeError)
from .flow import (FieldStrength, PhaseState, Trajectory, curvature_profile, energy, integrate,
                   state_from_energy, state_from_velocity, step)
from .fuchsian import (FuchsianGroup, default_group, genus2_octagon_group, in_domain,
                       integrate_on_quotient, project_trajectory, reduce, reduce_state)
from .hyperbolic import (DiskPoint, MobiusTransform, conformal_factor, distance,
                         mobius_apply, mobius_compose, mobius_inverse)
from .integrals import (ObservableFunction, conservation_report, integral_I_f,
                        locate_closed_trajectory, poisson_bracket)

__version__ = "0.1.0"
