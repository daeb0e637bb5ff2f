# Unit tests for summation modules
