#!/usr/bin/env python3
"""
Thin wrapper around the composite_bethe package.
Usage: python verify.py --suite theorem1 --L 3 --split 1 --a 2 --b 2 --seed 7 --out report.json
"""

import sys

from composite_bethe.cli import main


if __name__ == "__main__":
    sys.exit(main())
