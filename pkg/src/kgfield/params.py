"""Model-wide parameters and quadrature configuration.

Conventions used throughout the package (all formulas and tests assume
exactly these):

* Metric signature (+, -, ..., -): for a 4-momentum ``k = (k0, kvec)`` the
  invariant square is ``k0**2 - |kvec|**2``.
* Mass shell: ``omega(kvec) = sqrt(|kvec|**2 + mass**2)``.
* Fourier transform of a spacetime test function:
  ``ft(k) = integral f(t, x) * exp(+1j*(k0*t - kvec.x)) dt d^dx``.
* ``hbar`` multiplies every inner-product kernel and is carried explicitly.

Spatial dimension ``dim`` is 1 by default; 2 and 3 are supported with the
same code paths at looser tolerances.
"""

from dataclasses import dataclass, field

import numpy as np

ADAPTIVE_RULE = "adaptive-tensor"
GAUSS_HERMITE_RULE = "gauss-hermite-mapped"

_RULES = (ADAPTIVE_RULE, GAUSS_HERMITE_RULE)


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for momentum-space kernel integration.

    kmax == 0.0 requests automatic cutoff selection per function pair
    (analytic tail bounds for Gaussian pairs, measured decay otherwise).
    panel_scale multiplies the initial panel counts of every rule; setting
    it to 2.0 roughly doubles the node budget, which is what the
    convergence hygiene checks compare against.
    """

    rule: str = ADAPTIVE_RULE
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_nodes: int = 2_000_000
    kmax: float = 0.0
    panel_scale: float = 1.0

    def __post_init__(self):
        if self.rule not in _RULES:
            raise ValueError(f"unknown quadrature rule {self.rule!r}; expected one of {_RULES}")
        if not (self.abs_tol >= 0.0 and np.isfinite(self.abs_tol)):
            raise ValueError("abs_tol must be finite and non-negative")
        if not (self.rel_tol >= 0.0 and np.isfinite(self.rel_tol)):
            raise ValueError("rel_tol must be finite and non-negative")
        if self.abs_tol == 0.0 and self.rel_tol == 0.0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if self.max_nodes < 1000:
            raise ValueError("max_nodes too small to be useful (need >= 1000)")
        if not (self.kmax >= 0.0 and np.isfinite(self.kmax)):
            raise ValueError("kmax must be finite and non-negative (0 = automatic)")
        if not (self.panel_scale >= 1.0 and np.isfinite(self.panel_scale)):
            raise ValueError("panel_scale must be >= 1 (node-doubling studies scale it up)")


@dataclass(frozen=True)
class ModelParams:
    """Physical and numerical parameters shared by one model instance."""

    mass: float = 1.0
    dim: int = 1
    hbar: float = 1.0
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not (self.mass > 0.0 and np.isfinite(self.mass)):
            raise ValueError("mass must be positive and finite")
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        if not (self.hbar > 0.0 and np.isfinite(self.hbar)):
            raise ValueError("hbar must be positive and finite")

    def omega(self, kvec):
        """Mass-shell frequency for an (N, dim) or (N,) array of momenta."""
        kvec = np.asarray(kvec, dtype=float)
        if kvec.ndim == 1:
            sq = kvec * kvec if self.dim == 1 else np.sum(kvec * kvec, axis=-1)
        else:
            sq = np.sum(kvec * kvec, axis=-1)
        return np.sqrt(sq + self.mass * self.mass)
