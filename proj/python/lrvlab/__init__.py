"""Difference-based long-run variance estimation."""

from ._core import (
    ConfigError,
    DifferenceSequence,
    DomainError,
    Error,
    InsufficientDataError,
    Kernel,
    NumericError,
    asymptotic_mse_constant,
    binomial_sequence,
    estimate,
    k_diff,
    kolmogorov_critical_value,
    ks_test,
    local_linear_trend,
    local_sequence,
    lrv,
    lrv_oracle,
    normalize_sequence,
    optimal_bandwidth,
    optimal_sequence,
    presets,
    rough_center,
    scb,
    simulate,
    suggested_estimator,
    wz_test,
)

__all__ = [
    "ConfigError",
    "DifferenceSequence",
    "DomainError",
    "Error",
    "InsufficientDataError",
    "Kernel",
    "NumericError",
    "asymptotic_mse_constant",
    "binomial_sequence",
    "estimate",
    "k_diff",
    "kolmogorov_critical_value",
    "ks_test",
    "local_linear_trend",
    "local_sequence",
    "lrv",
    "lrv_oracle",
    "normalize_sequence",
    "optimal_bandwidth",
    "optimal_sequence",
    "presets",
    "rough_center",
    "scb",
    "simulate",
    "suggested_estimator",
    "wz_test",
]
