#!/usr/bin/env python3
"""
Run script for the PR-Net channel extrapolation toolkit.
Equivalent to the ``prnet`` console script.
"""
import os
import sys

# Ensure we're in the project directory
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from app.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
