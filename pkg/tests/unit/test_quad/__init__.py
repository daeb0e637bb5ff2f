# Unit tests for quadrature modules
