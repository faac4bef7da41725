"""Exact jets, logarithmic jet coordinates and jet-differential checks."""

from __future__ import annotations

from .directed import (
    DirectedStructure,
    constraint_polynomials,
    integrate_germ,
    is_directed_jet,
    log_constraint_polynomials,
    reduce_constraints,
)
from .errors import (
    ChartDomainError,
    ConfigurationError,
    DomainError,
    LogjetError,
    ParseError,
    PrecisionError,
    ShapeError,
)
from .jetcore import CurveJet, Jet1, PolynomialGerm, Reparam, jet_compose
from .jetdiff import (
    check_equivariance,
    d_operator,
    normalized_derivative_check,
    theta_sequence,
    wronskian_dependence,
    wronskian_polynomial,
)
from .logcoords import LogChart, LogJetCoords, g_polynomials, hat_from_log, to_log_coords
from .parser import analyze_expression, parse_expression
from .polynomial import JetPolynomial
from .scalars import QQi
from .semple import SemplePoint, chart_coords, check_lift_invariance, lift_curve, project
from .theta import LatticeVector, ThetaSeries, quasi_periodicity_check, wronskian_theta

__version__ = "0.1.0"
