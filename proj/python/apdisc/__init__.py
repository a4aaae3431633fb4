"""Arithmetic-progression discrepancy on integer grids."""

from ._apdisc import (
    Coloring,
    ColoringResult,
    HypothesisError,
    InputError,
    LowerBoundCert,
    SolveError,
    bound_report,
    chi_sum,
    count_small_gcd_points,
    disc_eval,
    energy_inequality_check,
    exact_min_disc,
    f_count,
    lll_reduce,
    lower_bound_value,
    manual_cert,
    projection_map,
    solve,
    u_sum,
)

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "ColoringResult",
    "HypothesisError",
    "InputError",
    "LowerBoundCert",
    "SolveError",
    "bound_report",
    "chi_sum",
    "count_small_gcd_points",
    "disc_eval",
    "energy_inequality_check",
    "exact_min_disc",
    "f_count",
    "lll_reduce",
    "lower_bound_value",
    "manual_cert",
    "projection_map",
    "solve",
    "u_sum",
]
