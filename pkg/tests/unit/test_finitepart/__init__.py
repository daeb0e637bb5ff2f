# Unit tests for finite parts
