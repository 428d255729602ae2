"""Poisson series representation of alpha-stable laws: sampling, CFs and
Kolmogorov-distance bounds. Thin wrapper over the C++ core."""

from ._stable_psr import (
    ConvergenceError,
    DomainError,
    UnreachableTolerance,
    bound,
    c_alpha,
    c_of_alpha,
    choose_c,
    cms_sample,
    esseen,
    g,
    log_cf_r_integral,
    log_cf_x0c,
    log_cf_x_hat,
    log_cf_z_closed,
    log_cf_z_series,
    lower_inc_gamma,
    map_w_to_stable,
    q,
    residual_moments,
    sample,
    stable_log_cf,
    upper_inc_gamma,
)

__all__ = [name for name in dir() if not name.startswith("_")]
