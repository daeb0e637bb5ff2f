"""hadamard-pf - Hadamard finite parts, divergence witnesses and summation interfaces on (0,1]."""

__version__ = "1.0.0"
