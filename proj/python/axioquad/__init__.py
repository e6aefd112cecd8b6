"""Axiomatic integration: Darboux brackets, asymptotic limits, geometric functionals."""

from ._axioquad import (
    Error,
    __version__,
    arclength,
    area,
    darboux,
    estimate_limit,
    fit_order,
    integrate,
    is_little_o,
    uniqueness_crosscheck,
    verify_additivity,
    verify_asymptotic,
    volume,
)

__all__ = [
    "Error",
    "__version__",
    "arclength",
    "area",
    "darboux",
    "estimate_limit",
    "fit_order",
    "integrate",
    "is_little_o",
    "uniqueness_crosscheck",
    "verify_additivity",
    "verify_asymptotic",
    "volume",
]
