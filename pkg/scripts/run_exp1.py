#!/usr/bin/env python3
"""Experiment 1 preset; extra flags are passed through to the CLI."""

import sys

from xlzf.cli import main

if __name__ == "__main__":
    sys.exit(main(["exp1", *sys.argv[1:]]))
