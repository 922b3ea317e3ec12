"""Exactly solvable Fokker-Planck models with deformed polynomial spectra.

Spectral densities, drift landscapes and Monte Carlo cross-validation for
the L1/L2 (half-line) and J1/J2 (bounded) diffusion families.
"""

from .xpoly import EigenState, ModelParams, eigen_state
from .spectral import (
    current_density,
    drift,
    drift_potential,
    eigenfunction,
    eigenvalue,
    expand_profile,
    pdf_delta,
    pdf_from_coeffs,
    peak_tendency,
    prepotential,
    stationary_pdf,
)
from .quadrature import gauss_legendre_rule, integrate, integrate_semi_infinite

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ModelParams",
    "EigenState",
    "eigen_state",
    "prepotential",
    "drift_potential",
    "drift",
    "eigenvalue",
    "eigenfunction",
    "stationary_pdf",
    "pdf_delta",
    "expand_profile",
    "pdf_from_coeffs",
    "current_density",
    "peak_tendency",
    "gauss_legendre_rule",
    "integrate",
    "integrate_semi_infinite",
]
