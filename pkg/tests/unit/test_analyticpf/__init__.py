# Unit tests for analytic interpolation modules
