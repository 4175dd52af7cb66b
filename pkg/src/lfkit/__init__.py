"""Coefficient tables and desk-scale experiments for degree-n Dirichlet series.

The package turns local root data (unit-product multisets per prime) into
dense coefficient tables, verifies the multiplicative relations those
coefficients must satisfy, and runs quantitative experiments: exact
mean squares of Dirichlet polynomials, smoothed log-derivative proxies,
convergent majorants, vertical-line integral identities, and disc-average
zero counting.
"""

from .config import DEFAULT, STRICT, Profile, get_profile
from .errors import (
    CapacityError,
    DegenerateCenterError,
    DomainError,
    FormValidationError,
    IngestionError,
    InsufficientTableError,
    LfkitError,
    NumericError,
    OracleWindowError,
    PoleError,
)
from .satake import (
    BoundCheck,
    HeckeEigenvalueVector,
    SatakeLocal,
    ThetaBound,
    alphas_from_hecke,
    check_bound,
    hecke_from_alphas,
    power_sum,
    theta_bound,
)
from .forms import FormSpec, builtin_forms, load_form, tau_coefficients
from .coeffs import (
    CoefficientTable,
    LocalCoefficients,
    build_coefficient_table,
    dual_symmetry_check,
    local_A_powers,
    power_sums_from_h,
    tuple_coefficient,
    verify_hecke_relation,
)
from .kernels import (
    ContourSpec,
    DiscSpec,
    IdentityCheck,
    cahen_mellin_check,
    complex_gamma,
    jensen_count,
    mellin_contour,
    smoothed_series_vs_contour,
    zero_count_bound,
    zeta_em,
)
from .meansquare import (
    DirichletPolynomial,
    MeanSquareResult,
    exact_mean_square,
    hard_cutoff,
    mv_discrepancy,
    smoothed_logderiv_polynomial,
    split_boundary,
    truncated_tail_split,
)
from .experiments import (
    ExperimentReport,
    lemma5_tail,
    lemma6_head,
    line2_sandwich,
    mv_experiment,
    rudnick_sarnak_partial,
    smoothing_scale,
    theorem1_majorant,
    theorem2_experiment,
    theorem2_grid,
    zeta_oracle_crosscheck,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "STRICT",
    "Profile",
    "get_profile",
    "LfkitError",
    "DomainError",
    "PoleError",
    "DegenerateCenterError",
    "IngestionError",
    "FormValidationError",
    "InsufficientTableError",
    "NumericError",
    "CapacityError",
    "OracleWindowError",
    "SatakeLocal",
    "HeckeEigenvalueVector",
    "ThetaBound",
    "BoundCheck",
    "theta_bound",
    "check_bound",
    "alphas_from_hecke",
    "hecke_from_alphas",
    "power_sum",
    "FormSpec",
    "load_form",
    "builtin_forms",
    "tau_coefficients",
    "CoefficientTable",
    "LocalCoefficients",
    "build_coefficient_table",
    "local_A_powers",
    "power_sums_from_h",
    "tuple_coefficient",
    "verify_hecke_relation",
    "dual_symmetry_check",
    "ContourSpec",
    "DiscSpec",
    "IdentityCheck",
    "complex_gamma",
    "zeta_em",
    "mellin_contour",
    "cahen_mellin_check",
    "smoothed_series_vs_contour",
    "jensen_count",
    "zero_count_bound",
    "DirichletPolynomial",
    "MeanSquareResult",
    "exact_mean_square",
    "mv_discrepancy",
    "split_boundary",
    "hard_cutoff",
    "truncated_tail_split",
    "smoothed_logderiv_polynomial",
    "ExperimentReport",
    "smoothing_scale",
    "lemma5_tail",
    "lemma6_head",
    "theorem1_majorant",
    "rudnick_sarnak_partial",
    "theorem2_experiment",
    "theorem2_grid",
    "zeta_oracle_crosscheck",
    "line2_sandwich",
    "mv_experiment",
]
