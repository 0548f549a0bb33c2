"""
Command-line entry point for ruelle-lab.
"""
import sys

from src.cli.runner import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
