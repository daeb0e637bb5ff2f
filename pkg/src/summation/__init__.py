"""Binary sequences, summation operators and the antiderivative interface."""

from .interface import SummationTrace, build_mask, interface_sum, mask_defect
from .operators import (
    BasedAtInfinityReport,
    SummationConstant,
    s_dblstar,
    s_star,
    standard_sum,
    verify_based_at_infinity,
)
from .sequences import BinarySeq, EventuallyZero, Periodic, dump_corpus, load_corpus, random_pair

__all__ = [
    "BinarySeq",
    "EventuallyZero",
    "Periodic",
    "load_corpus",
    "dump_corpus",
    "random_pair",
    "standard_sum",
    "s_star",
    "s_dblstar",
    "SummationConstant",
    "verify_based_at_infinity",
    "BasedAtInfinityReport",
    "build_mask",
    "mask_defect",
    "interface_sum",
    "SummationTrace",
]
