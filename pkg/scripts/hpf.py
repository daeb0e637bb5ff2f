#!/usr/bin/env python
"""Command-line entry point for finite parts, witnesses and interface summation.

Prints one report (json, csv or text) on stdout and exits with 0 when every
check passes, 1 on a failed check, 2 on a violated precondition and 3 on
invalid input.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.parser import main


if __name__ == "__main__":
    sys.exit(main())
