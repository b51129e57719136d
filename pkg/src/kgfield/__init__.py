"""Klein-Gordon random and quantum fields as Wick algebras over numerically
evaluated mass-shell kernels.

The package splits into layers: ``testfn`` (smearing functions and their
Fourier data), ``shell`` (mass-shell inner-product kernels), ``wick``
(normal-ordered creation/annihilation algebra), ``fields`` (the field
operators themselves), ``oracles`` (independent recomputations used by the
test suite), and ``verify`` (the identity suites and report writers).
"""

from . import fields, oracles, shell, testfn, verify, wick
from .errors import (
    KgfieldError,
    NonFiniteSampleError,
    QuadratureConvergenceError,
    TermBudgetError,
    UnknownFamilyError,
    UnsupportedQueryError,
)
from .params import ADAPTIVE_RULE, GAUSS_HERMITE_RULE, ModelParams, QuadratureSpec

__version__ = "0.1.0"

__all__ = [
    "ADAPTIVE_RULE",
    "GAUSS_HERMITE_RULE",
    "KgfieldError",
    "ModelParams",
    "NonFiniteSampleError",
    "QuadratureConvergenceError",
    "QuadratureSpec",
    "TermBudgetError",
    "UnknownFamilyError",
    "UnsupportedQueryError",
    "__version__",
    "fields",
    "oracles",
    "shell",
    "testfn",
    "verify",
    "wick",
]
