# Unit tests for workflow modules
