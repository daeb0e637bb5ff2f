"""Hadamard finite parts on (0, 1] by repeated integration by parts."""

from .riesz import (
    PFQuery,
    PFResult,
    SufcReport,
    check_sufc,
    depth_sweep,
    pf_depth_consistency,
    pf_riesz,
    pochhammer_ratio,
    riesz_to_fractional,
    sufc_integrand,
    tail_coefficient,
)

__all__ = [
    "PFQuery",
    "PFResult",
    "SufcReport",
    "pochhammer_ratio",
    "tail_coefficient",
    "sufc_integrand",
    "check_sufc",
    "pf_riesz",
    "pf_depth_consistency",
    "depth_sweep",
    "riesz_to_fractional",
]
