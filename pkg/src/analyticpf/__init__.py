"""Interpolating entire functions on β-nodes, Laurent finite parts and window checks."""

from .beta import BetaSequence, make_beta
from .conda import CondaReport, verify_conda
from .interpolation import (
    CauchyDerivative,
    DecayReport,
    FEvaluation,
    GrowthReport,
    IncrementReport,
    InterpolationSystem,
    LogMagnitude,
    build_system,
    check_coefficient_decay,
    check_growth,
    coeff_B,
    deriv_via_cauchy,
    eval_F,
    increment_check,
    pulled_back_derivative,
    termwise_derivative,
)
from .laurent import LaurentData, MeromorphicPF, derivative_residual, pf_meromorphic

__all__ = [
    "BetaSequence",
    "make_beta",
    "InterpolationSystem",
    "LogMagnitude",
    "build_system",
    "coeff_B",
    "eval_F",
    "FEvaluation",
    "termwise_derivative",
    "check_growth",
    "GrowthReport",
    "check_coefficient_decay",
    "DecayReport",
    "deriv_via_cauchy",
    "CauchyDerivative",
    "increment_check",
    "IncrementReport",
    "pulled_back_derivative",
    "LaurentData",
    "MeromorphicPF",
    "pf_meromorphic",
    "derivative_residual",
    "verify_conda",
    "CondaReport",
]
