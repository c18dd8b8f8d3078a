"""Magnitude and magnitude homology of finite quasi-metric spaces.

Magnitude is computed exactly as a generalized rational function of ``q``;
magnitude homology is computed over the integers by Smith normal form, and
the two are reconciled grading by grading.
"""

from hmag.chains import BoundaryMatrix, ChainBasis, boundary_family, boundary_matrix, enumerate_generators
from hmag.cli import ReconciliationRow, cmd_check, cmd_homology, cmd_magnitude, cmd_predicates, reconcile
from hmag.exact import GenPoly, RatFun, ScaledPoly, evaluate_at, gp_arith, gp_sign, scale_exponents, series_expand, unscale
from hmag.homology import HomologySummary, SNFResult, homology_at, magnitude_homology, snf
from hmag.magnitude import (
    MagnitudeResult,
    ZetaMatrix,
    det_leading_term,
    divergent_series,
    divergent_series_magnitude,
    magnitude,
    magnitude_at,
    magnitude_series,
    partial_euler,
    weight_sum,
    zeta_matrix,
)
from hmag.oracle import NOT_APPLICABLE, h0_oracle, h1_oracle, h2_oracle, oracle_report
from hmag.space import (
    FinMetric,
    adjacent,
    between,
    graph_to_metric,
    has_no_4cuts,
    is_geodetic,
    scale_space,
    skeletonize,
    strictly_between,
    validate,
)

__all__ = [
    "adjacent",
    "between",
    "boundary_family",
    "boundary_matrix",
    "BoundaryMatrix",
    "ChainBasis",
    "cmd_check",
    "cmd_homology",
    "cmd_magnitude",
    "cmd_predicates",
    "det_leading_term",
    "divergent_series",
    "divergent_series_magnitude",
    "enumerate_generators",
    "evaluate_at",
    "FinMetric",
    "GenPoly",
    "gp_arith",
    "gp_sign",
    "graph_to_metric",
    "h0_oracle",
    "h1_oracle",
    "h2_oracle",
    "has_no_4cuts",
    "homology_at",
    "HomologySummary",
    "is_geodetic",
    "magnitude",
    "magnitude_at",
    "magnitude_homology",
    "magnitude_series",
    "MagnitudeResult",
    "NOT_APPLICABLE",
    "oracle_report",
    "partial_euler",
    "RatFun",
    "reconcile",
    "ReconciliationRow",
    "scale_exponents",
    "scale_space",
    "ScaledPoly",
    "series_expand",
    "skeletonize",
    "snf",
    "SNFResult",
    "strictly_between",
    "unscale",
    "validate",
    "weight_sum",
    "zeta_matrix",
    "ZetaMatrix",
]

__version__ = "0.1.0"
