"""Function handles on (0,1], gluing profiles, germs and antiderivatives."""

from .handle import (
    DerivativeCheck,
    DerivativeEstimate,
    FunctionHandle,
    PhaseMap,
    eval_deriv,
    germ_equal,
    germ_grid,
    linear_combination,
    verify_derivatives,
)
from .gluing import GluingProfile, Profile, ProfileProduct, make_semigroup_element, smooth_step
from .antiderivative import (
    AnchoredAntiderivative,
    AxiomCheck,
    AxiomReport,
    Primitive,
    verify_extension_axioms,
    zero_functional,
)

__all__ = [
    "FunctionHandle",
    "PhaseMap",
    "DerivativeEstimate",
    "DerivativeCheck",
    "eval_deriv",
    "verify_derivatives",
    "germ_equal",
    "germ_grid",
    "linear_combination",
    "GluingProfile",
    "Profile",
    "ProfileProduct",
    "smooth_step",
    "make_semigroup_element",
    "AnchoredAntiderivative",
    "Primitive",
    "AxiomCheck",
    "AxiomReport",
    "verify_extension_axioms",
    "zero_functional",
]
