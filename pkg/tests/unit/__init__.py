# Unit tests for hadamard-pf
