"""
Core settings and numerical defaults for ruelle-lab.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")

LOG_LEVEL = "INFO"

# Where CLI artifacts land
OUTPUT_DIR = Path(os.getenv("RUELLE_LAB_OUTPUT_DIR", str(BASE_DIR / "output")))

# Tolerances
IDENTITY_TOL = 1e-12       # single algebraic identities, inverse branches
ARITHMETIC_TOL = 1e-10     # pull-out, normalization, kernel decomposition
HARMONIC_TOL = 1e-8        # harmonicity and iterated-operator identities

# Defaults
DEFAULT_SAMPLES = 1000
DEFAULT_QUADRATURE_ORDER = 5
DEFAULT_SEED = 0
DEFAULT_CHAINS = 256
MAX_CYLINDERS = 10_000_000
