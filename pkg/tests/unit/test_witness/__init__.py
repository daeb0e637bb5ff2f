# Unit tests for witness modules
