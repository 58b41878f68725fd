"""Numerical groupoid of partially invertible matrix operators.

Polar data and supports, projection-lattice charts, the frame bundle
with its gauge description, invariant vector fields with algebroid
brackets, derivations of vector fields, and a deterministic randomized
property harness exercising every structural identity.
"""

__version__ = "0.1.0"

from .algebra import (
    Algebra,
    BorderlineSpectrumError,
    CornerInversionError,
    PolarData,
    adj,
    corner,
    corner_inverse,
    corner_invertible,
    is_inverse_pair,
    is_partially_invertible,
    is_projection,
    opnorm,
    partial_inverse,
    polar_decompose,
    projection_rank,
)
from .groupoid import (
    GroupoidChartPoint,
    GroupoidElement,
    NotComposableError,
    compose,
    element,
    groupoid_chart,
    groupoid_chart_inverse,
    groupoid_chart_transition,
    inverse,
    involution,
    involution_in_chart,
    is_partial_isometry,
)
from .lattice import (
    ChartDomainError,
    LatticeOrbit,
    chart_section,
    from_chart,
    in_chart,
    to_chart,
    transition,
    transition_coefficients,
)
from .harness import DEFAULT_SUITES, SuiteConfig, run_suites
