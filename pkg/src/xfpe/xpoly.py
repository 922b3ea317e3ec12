"""Model parameters and the deformed polynomial families.

Four families are supported. L1 and L2 deform the radial-oscillator
(generalized Rayleigh) eigenfunctions on (0, inf); J1 and J2 deform the
trigonometric Poschl-Teller (Jacobi) eigenfunctions on (0, pi/2). The
deformation degree ``ell`` shifts every polynomial to degree ``ell + n``
while leaving the spectrum label n = 0, 1, 2, ... intact; ``ell = 0``
reduces each family to its classical counterpart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun

__all__ = [
    "Family",
    "ModelParams",
    "EigenState",
    "eigen_state",
    "xi",
    "xi_deriv",
    "xi_coefficients",
    "xi_log_deriv_diff",
    "x_polynomial",
    "x_polynomial_table",
    "normalization",
    "energy",
]

_LAGUERRE_FAMILIES = ("L1", "L2")
_JACOBI_FAMILIES = ("J1", "J2")

Family = str  # one of "L1", "L2", "J1", "J2"


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set (family, g, h, ell) for one diffusion model.

    g and h are the wall-strength exponents of the drift potential; h only
    applies to the Jacobi families and must satisfy the family ordering
    (J1: g > h > 0, J2: h > g > 0). ell >= 0 is the deformation degree.
    """

    family: Family
    g: float
    h: float | None = None
    ell: int = 0

    def __post_init__(self):
        if self.family not in _LAGUERRE_FAMILIES + _JACOBI_FAMILIES:
            raise ValueError(
                f"family must be one of L1, L2, J1, J2, got {self.family!r}"
            )
        g = float(self.g)
        if not np.isfinite(g) or g <= 0.0:
            raise ValueError(f"g must be finite and > 0, got g={self.g!r}")
        object.__setattr__(self, "g", g)
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"ell must be a non-negative integer, got ell={self.ell!r}")
        object.__setattr__(self, "ell", int(self.ell))
        if self.is_laguerre:
            # h is meaningless for the half-line families; drop it.
            object.__setattr__(self, "h", None)
            return
        if self.h is None:
            raise ValueError(f"family {self.family} requires h")
        h = float(self.h)
        if not np.isfinite(h) or h <= 0.0:
            raise ValueError(f"h must be finite and > 0, got h={self.h!r}")
        object.__setattr__(self, "h", h)
        if self.family == "J1" and not self.g > self.h:
            raise ValueError(
                f"J1 requires g > h > 0, got g={self.g}, h={self.h}"
            )
        if self.family == "J2" and not self.h > self.g:
            raise ValueError(
                f"J2 requires h > g > 0, got g={self.g}, h={self.h}"
            )

    @property
    def is_laguerre(self) -> bool:
        return self.family in _LAGUERRE_FAMILIES

    def domain(self) -> tuple[float, float]:
        """Open interval the process lives on."""
        if self.is_laguerre:
            return 0.0, math.inf
        return 0.0, math.pi / 2.0


@dataclass(frozen=True)
class EigenState:
    """One spectral mode: its parameters, label n, energy and norm constant."""

    params: ModelParams
    n: int
    energy: float
    norm_const: float


def _check_mode(n) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"mode label n must be a non-negative integer, got {n!r}")
    return int(n)


def _xi_classical_params(params: ModelParams, shift: int):
    """(alpha, beta-or-None, negate_arg) of the classical polynomial behind xi."""
    g = params.g + shift
    ell = params.ell
    if params.family == "L1":
        return g + ell - 1.5, None, True
    if params.family == "L2":
        return -g - ell - 0.5, None, False
    h = params.h + shift
    if params.family == "J1":
        return g + ell - 1.5, -h - ell - 0.5, False
    return -g - ell - 0.5, h + ell - 1.5, False


def xi(params: ModelParams, eta, shift: int = 0):
    """Deforming polynomial xi_ell(eta) of degree ell; identically 1 for ell=0.

    shift=1 evaluates the companion polynomial with (g, h) -> (g+1, h+1),
    which enters every drift and eigenfunction formula alongside shift=0.
    """
    eta = np.asarray(eta, dtype=float)
    if params.ell == 0:
        return np.ones_like(eta)
    alpha, beta, negate = _xi_classical_params(params, shift)
    if beta is None:
        return specfun.laguerre(params.ell, alpha, -eta if negate else eta)
    return specfun.jacobi(params.ell, alpha, beta, eta)


def xi_deriv(params: ModelParams, eta, shift: int = 0):
    """d/d(eta) of xi."""
    eta = np.asarray(eta, dtype=float)
    if params.ell == 0:
        return np.zeros_like(eta)
    alpha, beta, negate = _xi_classical_params(params, shift)
    if beta is None:
        ell = params.ell
        if negate:
            # d/deta L_l(-eta) = -L_l'(-eta) * (-1)' ... chain rule flips the
            # usual -L_{l-1}^(a+1) into +L_{l-1}^(a+1)(-eta).
            return specfun.laguerre(ell - 1, alpha + 1.0, -eta)
        return -specfun.laguerre(ell - 1, alpha + 1.0, eta)
    return specfun.jacobi_deriv(params.ell, alpha, beta, eta)


def xi_coefficients(params: ModelParams, shift: int = 0) -> np.ndarray:
    """Monomial coefficients of xi in eta, ascending; [1.0] for ell=0."""
    if params.ell == 0:
        return np.array([1.0])
    alpha, beta, negate = _xi_classical_params(params, shift)
    if beta is None:
        coeffs = specfun.laguerre_coefficients(params.ell, alpha)
        if negate:
            coeffs = coeffs * (-1.0) ** np.arange(params.ell + 1)
        return coeffs
    return specfun.jacobi_coefficients(params.ell, alpha, beta)


def xi_log_deriv_diff(params: ModelParams, eta):
    """xi'(eta)/xi(eta) at shift=1 minus the same ratio at shift=0.

    This combination is what the drift and the prepotential derivative need.
    Raises if either polynomial is within 1e-13 of zero relative to its
    local coefficient scale (the valid parameter ranges keep both zero-free
    on the physical domain, so a near-zero means bad inputs).
    """
    eta = np.asarray(eta, dtype=float)
    if params.ell == 0:
        return np.zeros_like(eta)
    out = np.zeros_like(eta)
    for shift, sign in ((1, 1.0), (0, -1.0)):
        val = xi(params, eta, shift)
        coeffs = xi_coefficients(params, shift)
        scale = np.polynomial.polynomial.polyval(np.abs(eta), np.abs(coeffs))
        if np.any(np.abs(val) < 1e-13 * scale):
            bad = np.abs(val) < 1e-13 * scale
            raise ZeroDivisionError(
                f"xi (shift={shift}) vanishes near eta={np.asarray(eta)[bad].flat[0]:.6g} "
                f"for {params}; log-derivative undefined"
            )
        out = out + sign * xi_deriv(params, eta, shift) / val
    return out


def x_polynomial_table(params: ModelParams, n_max: int, eta) -> np.ndarray:
    """Deformed polynomials P_{ell,n}(eta) for all n = 0..n_max.

    Row n has polynomial degree ell + n. For ell = 0 the rows are the
    classical Laguerre/Jacobi polynomials of the family's weight.
    """
    n_max = _check_mode(n_max)
    eta = np.asarray(eta, dtype=float)
    g, h, ell = params.g, params.h, params.ell
    fam = params.family

    if ell == 0:
        if params.is_laguerre:
            return specfun.laguerre_all(n_max, g - 0.5, eta)
        return specfun.jacobi_all(n_max, g - 0.5, h - 0.5, eta)

    a = xi(params, eta, shift=1)
    b = xi(params, eta, shift=0)
    out = np.empty((n_max + 1,) + eta.shape, dtype=float)
    ns = np.arange(n_max + 1, dtype=float).reshape((-1,) + (1,) * eta.ndim)

    if fam == "L1":
        alpha = g + ell - 1.5
        tab = specfun.laguerre_all(n_max, alpha, eta)
        dtab = np.zeros_like(tab)
        if n_max >= 1:
            dtab[1:] = -specfun.laguerre_all(n_max - 1, alpha + 1.0, eta)
        out[:] = a * tab - b * dtab
    elif fam == "L2":
        alpha = g + ell + 0.5
        tab = specfun.laguerre_all(n_max, alpha, eta)
        dtab = np.zeros_like(tab)
        if n_max >= 1:
            dtab[1:] = -specfun.laguerre_all(n_max - 1, alpha + 1.0, eta)
        out[:] = ((g + 0.5) * a * tab + eta * b * dtab) / (ns + g + 0.5)
    elif fam == "J1":
        alpha, beta = g + ell - 1.5, h + ell + 0.5
        tab = specfun.jacobi_all(n_max, alpha, beta, eta)
        dtab = np.zeros_like(tab)
        if n_max >= 1:
            fac = (ns[1:] + alpha + beta + 1.0) / 2.0
            dtab[1:] = fac * specfun.jacobi_all(n_max - 1, alpha + 1.0, beta + 1.0, eta)
        out[:] = ((h + 0.5) * a * tab + (1.0 + eta) * b * dtab) / (ns + h + 0.5)
    else:  # J2
        alpha, beta = g + ell + 0.5, h + ell - 1.5
        tab = specfun.jacobi_all(n_max, alpha, beta, eta)
        dtab = np.zeros_like(tab)
        if n_max >= 1:
            fac = (ns[1:] + alpha + beta + 1.0) / 2.0
            dtab[1:] = fac * specfun.jacobi_all(n_max - 1, alpha + 1.0, beta + 1.0, eta)
        out[:] = ((g + 0.5) * a * tab - (1.0 - eta) * b * dtab) / (ns + g + 0.5)
    return out


def x_polynomial(params: ModelParams, n: int, eta):
    """Deformed polynomial P_{ell,n}(eta), degree ell + n."""
    n = _check_mode(n)
    return x_polynomial_table(params, n, np.asarray(eta, dtype=float))[n]


def energy(params: ModelParams, n: int) -> float:
    """Relaxation rate E_{ell,n} of mode n; E_{ell,0} = 0."""
    n = _check_mode(n)
    if params.is_laguerre:
        return 4.0 * n
    return 4.0 * n * (n + params.g + params.h + 2.0 * params.ell)


def normalization(params: ModelParams, n: int) -> float:
    """Norm constant N_{ell,n} making the mode-n eigenfunction unit norm.

    Assembled in log space so large g, h, ell, n do not overflow the
    intermediate gamma factors.
    """
    n = _check_mode(n)
    g, h, ell = params.g, params.h, params.ell
    lg = specfun.log_gamma
    if params.family == "L1":
        log_n2 = math.log(2.0) + lg(n + 1.0) - lg(n + g + ell + 0.5)
        if ell > 0:
            log_n2 += math.log(n + g + ell - 0.5) - math.log(n + g + 2.0 * ell - 0.5)
    elif params.family == "L2":
        log_n2 = math.log(2.0) + lg(n + 1.0) - lg(n + g + ell + 0.5)
        if ell > 0:
            log_n2 += math.log(n + g + 0.5) - math.log(n + g + ell + 0.5)
    else:
        gl, hl = g + ell, h + ell
        log_n2 = (
            math.log(2.0)
            + lg(n + 1.0)
            + math.log(2.0 * n + gl + hl)
            + lg(n + gl + hl)
            - lg(n + gl + 0.5)
            - lg(n + hl + 0.5)
        )
        if ell > 0:
            if params.family == "J1":
                log_n2 += (
                    math.log(n + h + 0.5)
                    + math.log(n + g + ell - 0.5)
                    - math.log(n + h + ell + 0.5)
                    - math.log(n + g + 2.0 * ell - 0.5)
                )
            else:
                log_n2 += (
                    math.log(n + g + 0.5)
                    + math.log(n + h + ell - 0.5)
                    - math.log(n + g + ell + 0.5)
                    - math.log(n + h + 2.0 * ell - 0.5)
                )
    return math.exp(0.5 * log_n2)


def eigen_state(params: ModelParams, n: int) -> EigenState:
    """Bundle (params, n, energy, norm constant) for mode n."""
    n = _check_mode(n)
    return EigenState(params=params, n=n, energy=energy(params, n),
                      norm_const=normalization(params, n))
