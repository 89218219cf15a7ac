"""Verification and computation for moments of symmetric-power Hecke
eigenvalues: exact composition-count coefficients, certified polynomial
identities, local Euler factor expansions, error-term exponents, and a
desk-scale partial-sum harness around the weight-12 eigenform."""

from . import combinatorics, euler, exponents, hecke, sums, symbolic
from .errors import CapacityError, ConsistencyError, FitError

__version__ = "0.1.0"

__all__ = [
    "combinatorics",
    "symbolic",
    "hecke",
    "euler",
    "exponents",
    "sums",
    "CapacityError",
    "ConsistencyError",
    "FitError",
    "__version__",
]
