#!/usr/bin/env python
# run_experiment.py
"""
Perturbed-lattice matching experiments - Main Script
Runs one subcommand and writes CSV/JSON results plus the resolved config
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from experiments import main


if __name__ == "__main__":
    sys.exit(main())
