"""Adaptive quadrature, improper limits toward 0 and integrability verdicts."""

from .results import ImproperVerdict, L1Verdict, QuadResult, VerdictKind
from .panels import CumulativeIntegral, integrate, local_gauss
from .improper import epsilon_schedule, improper_integral, l1_classify, limit_classify

__all__ = [
    "QuadResult",
    "ImproperVerdict",
    "VerdictKind",
    "L1Verdict",
    "CumulativeIntegral",
    "integrate",
    "local_gauss",
    "epsilon_schedule",
    "improper_integral",
    "l1_classify",
    "limit_classify",
]
