# Unit tests for function handles, gluing and antiderivatives
