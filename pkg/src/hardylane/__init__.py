"""Supersolution toolkit for Lane-Emden systems with inverse-square potentials.

Classifies (p, q, mu1, mu2) parameter points into nonexistence / existence /
open regions for the coupled system

    (-Delta + mu1/|x|^2) u = v^p,    (-Delta + mu2/|x|^2) v = u^q

on a punctured ball, produces machine-checkable nonexistence certificates
(weighted-L^1 failures and exponent-bootstrap crossings), and numerically
verifies the explicit radial supersolution constructions on log grids.
"""

from ._kernels import BACKEND as kernel_backend
from .exponents import (BoundaryValues, DomainValidationError, ExponentPair,
                        HardyParams, Powers, boundary_expressions, mu_zero,
                        p_star, tau_pair)
from .integrability import (IntegrabilityVerdict, integral_behavior,
                            is_gamma_integrable, weighted_integral)
from .iteration import (Certificate, CertificateKind, IterationTrace,
                        StepRecord, Variant, claim1_check,
                        crossing_step_bound, iterate_clamped, iterate_plain)
from .radial import (PositivityError, RadialFunction, RadialGrid, RadialTerm,
                     apply_hardy, default_grid, evaluate, hardy_fd_oracle,
                     pow_eval, scale)
from .regions import (RegionClass, Verdict, Witness, WitnessMismatchError,
                      classify, classify_field, classify_grid,
                      nonexistence_witness)

__version__ = "0.1.0"

__all__ = [
    "BoundaryValues", "Certificate", "CertificateKind",
    "DomainValidationError", "ExponentPair", "HardyParams",
    "IntegrabilityVerdict", "IterationTrace", "Powers", "PositivityError",
    "RadialFunction", "RadialGrid", "RadialTerm", "RegionClass",
    "StepRecord", "Variant", "Verdict", "Witness", "WitnessMismatchError",
    "apply_hardy", "boundary_expressions", "claim1_check", "classify",
    "classify_field", "classify_grid", "crossing_step_bound", "default_grid",
    "evaluate", "hardy_fd_oracle", "integral_behavior", "is_gamma_integrable",
    "iterate_clamped", "iterate_plain", "kernel_backend", "mu_zero",
    "nonexistence_witness", "p_star", "pow_eval", "scale", "tau_pair",
    "weighted_integral", "__version__",
]
