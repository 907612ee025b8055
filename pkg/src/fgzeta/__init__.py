"""Computational reorganization of truncated Euler products: evenization,
cumulant hierarchy, formal-group linearization, and the boundary-bulk
decomposition of cumulant fluctuations."""

from .rings import (ConstantTermError, RationalField, RealField,
                    RingMismatchError, DEFAULT_PRECISION_BITS)
from .series import SeriesRing, TruncatedSeries, from_json_dict, to_json_dict
from .formal_group import (AxiomReport, EulerFactorElement, FormalGroupLaw,
                           IsoPreconditionError, additive_law,
                           additivity_residual, apply_series, check_law_axioms,
                           check_strict_iso, default_kmax,
                           euler_factor_element, euler_factor_log_series,
                           fgm_exp, log_from_law, max_residual,
                           mercator_series, multiplicative_law,
                           nested_variables)
from .primes import (EulerianRow, PrimeTable, chebyshev_error, eulerian_row,
                     is_prime_trial, pairwise_sum, sieve_primes, sum_k_pow,
                     sum_k_pow_tail_bound, sum_k_pow_truncated,
                     weighted_prime_sum, weighted_prime_sums)
from .pipeline import (CompletedXi, CumulantTable, LogZetaExpansion, cumulants,
                       evenize, gaussian_deviation, log_zeta_cutoff, normalize)
from .fluctuation import (FluctDecomposition, WeightFunction,
                          coefficient_total, decompose, phi, phi_derivative,
                          stieltjes_identity_check)
from .quadrature import QuadratureError, integrate

__version__ = "0.1.0"

__all__ = [
    "ConstantTermError", "RationalField", "RealField", "RingMismatchError",
    "DEFAULT_PRECISION_BITS", "SeriesRing", "TruncatedSeries",
    "from_json_dict", "to_json_dict", "AxiomReport", "EulerFactorElement",
    "FormalGroupLaw", "IsoPreconditionError", "additive_law",
    "additivity_residual", "apply_series", "check_law_axioms",
    "check_strict_iso", "default_kmax", "euler_factor_element",
    "euler_factor_log_series", "fgm_exp", "log_from_law", "max_residual",
    "mercator_series", "multiplicative_law", "nested_variables", "EulerianRow", "PrimeTable", "chebyshev_error",
    "eulerian_row", "is_prime_trial", "pairwise_sum", "sieve_primes",
    "sum_k_pow", "sum_k_pow_tail_bound", "sum_k_pow_truncated",
    "weighted_prime_sum", "weighted_prime_sums", "CompletedXi",
    "CumulantTable", "LogZetaExpansion", "cumulants", "evenize",
    "gaussian_deviation", "log_zeta_cutoff", "normalize",
    "FluctDecomposition", "WeightFunction", "coefficient_total", "decompose",
    "phi", "phi_derivative", "stieltjes_identity_check", "QuadratureError",
    "integrate",
]
