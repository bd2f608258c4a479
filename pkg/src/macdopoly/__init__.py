"""Orthogonal polynomials for the weight x^alpha e^(-lambda x) rho_nu(x t).

High-precision construction of the two-parameter family P_n(x; lambda, t)
together with mechanical verification of its moment formulas, recurrence
coefficients, differential-difference and Toda-type laws, integral-difference
reconstructions, Laguerre/Prudnikov limits, and composition orthogonality
under theta = y D y.
"""

from .precision import (
    PrecisionContext,
    Params,
    DomainError,
    EscalationError,
    working_precision,
)
from .numerics import (
    QuadratureSpec,
    gamma_fn,
    log_gamma,
    pochhammer,
    integrate_semiline,
    integrate_interval,
    param_derivative,
)
from .kernels import (
    rho_eval,
    rho_recurrence_residual,
    rho_derivative_check,
    tricomi_psi,
    weight_eval,
    weight_ode_residual,
    ismail_quotient_check,
    laguerre_coefficients,
)
from .moments import (
    MomentTable,
    moment_closed_form,
    moment_quadrature,
    build_moment_table,
    weighted_power_integral,
)
from .opoly import (
    RecurrenceTable,
    GaussRule,
    build_recurrence,
    cached_recurrence,
    orthonormality_residual,
    eval_poly,
    poly_weighted_moment,
    poly_pair_weighted_moment,
    christoffel_darboux,
    gauss_rule,
    normalization_integrals,
    table_to_dict,
    rule_to_dict,
)
from .calculus import (
    IdentityReport,
    check_thm2_lambda,
    check_thm2_t,
    check_corollary1,
    check_thm3,
    check_2_30,
    check_lemma2,
    check_cor3,
    check_2_36_2_37,
    check_quasi_orthogonality,
    check_thm4_lambda,
    check_thm4_t,
    check_section4,
    scaling_residuals,
)
from .composition import (
    theta_apply,
    composition_integral,
    composition_orthogonality_check,
    rodrigues_check,
    base_function_check,
    theta_monomial_check,
)

__version__ = "1.0.0"

__all__ = [
    "PrecisionContext", "Params", "DomainError", "EscalationError",
    "working_precision",
    "QuadratureSpec", "gamma_fn", "log_gamma", "pochhammer",
    "integrate_semiline", "integrate_interval", "param_derivative",
    "rho_eval", "rho_recurrence_residual", "rho_derivative_check",
    "tricomi_psi", "weight_eval", "weight_ode_residual",
    "ismail_quotient_check", "laguerre_coefficients",
    "MomentTable", "moment_closed_form", "moment_quadrature",
    "build_moment_table", "weighted_power_integral",
    "RecurrenceTable", "GaussRule", "build_recurrence", "cached_recurrence",
    "orthonormality_residual", "eval_poly", "poly_weighted_moment",
    "poly_pair_weighted_moment", "christoffel_darboux", "gauss_rule",
    "normalization_integrals", "table_to_dict", "rule_to_dict",
    "IdentityReport", "check_thm2_lambda", "check_thm2_t",
    "check_corollary1", "check_thm3", "check_2_30", "check_lemma2",
    "check_cor3", "check_2_36_2_37", "check_quasi_orthogonality",
    "check_thm4_lambda", "check_thm4_t", "check_section4",
    "scaling_residuals",
    "theta_apply", "composition_integral",
    "composition_orthogonality_check", "rodrigues_check",
    "base_function_check", "theta_monomial_check",
    "__version__",
]
