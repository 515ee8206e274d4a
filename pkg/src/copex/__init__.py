"""Extropy-based dependence measures for bivariate copulas."""

from .copulas import (
    CopulaSurface,
    Family,
    FamilySpec,
    cocopula_surface,
    dual_surface,
    make_surface,
    parse_spec,
    section,
    survival_surface,
    transform_surface,
)
from .dependence import (
    DependenceSummary,
    blest_eta,
    check_inequalities,
    concordance_compare,
    dependence_summary,
    kendall_tau,
    pqd_classify,
    spearman_rho,
)
from .empirical import (
    BivariateSample,
    empirical_copula,
    empirical_survival_copula,
    load_builtin,
    load_sample,
    pqd_evidence,
    resub_ccex,
    resub_scex,
    sample_dependence,
)
from .errors import (
    CopexError,
    DegenerateSample,
    DomainError,
    NoDensity,
    NotConverged,
    ParseError,
    SpecParseError,
    TooFewRows,
)
from .measures import (
    MeasureReport,
    measure,
    verify_cocopula_identity,
    verify_dual_identity,
    verify_prop_2_1,
    verify_transform_theorems,
)
from .quadrature import IntegralResult, QuadratureConfig, integrate_interval, integrate_square
from .registry import Measure, MeasureKind
from .tables import verify_tables

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
