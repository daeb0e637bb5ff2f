# Test package for hadamard-pf
