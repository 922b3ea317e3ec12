"""Drift potentials, eigenfunctions and spectral probability densities.

Every family maps to a Schrodinger-type operator through a prepotential w(x):
the drift is D1(x) = 2 w'(x) = -U'(x), the stationary density is the squared
zero mode, and time evolution of a density is a sum over the discrete modes
with relaxation factors exp(-E_n t).
"""

from __future__ import annotations

import math

import numpy as np

from . import xpoly
from .xpoly import ModelParams

__all__ = [
    "DEFAULT_TERMS_LAGUERRE",
    "DEFAULT_TERMS_JACOBI",
    "default_terms",
    "default_grid",
    "eta_map",
    "prepotential",
    "drift_potential",
    "drift",
    "eigenvalue",
    "eigenfunction",
    "eigenfunction_table",
    "stationary_pdf",
    "pdf_delta",
    "pdf_delta_time_derivative",
    "expand_profile",
    "pdf_from_coeffs",
    "current_density",
    "peak_tendency",
    "eigen_residual",
    "fpe_residual",
]

DEFAULT_TERMS_LAGUERRE = 80
DEFAULT_TERMS_JACOBI = 50

DEFAULT_X_MAX = 5.0  # plot window for the half-line families
DEFAULT_GRID_POINTS = 2001
TAIL_RATIO = 1e-10  # truncation-tail warning threshold


def default_terms(params: ModelParams) -> int:
    return DEFAULT_TERMS_LAGUERRE if params.is_laguerre else DEFAULT_TERMS_JACOBI


def default_grid(params: ModelParams, points: int = DEFAULT_GRID_POINTS,
                 x_max: float = DEFAULT_X_MAX) -> np.ndarray:
    """Uniform evaluation grid clipped off the walls by width * 1e-4."""
    if points < 2:
        raise ValueError(f"grid needs at least 2 points, got {points}")
    lower, upper = params.domain()
    if params.is_laguerre:
        upper = float(x_max)
        if not upper > lower:
            raise ValueError(f"x_max must be positive, got {x_max!r}")
    eps = (upper - lower) * 1e-4
    return np.linspace(lower + eps, upper - eps, points)


def eta_map(params: ModelParams, x):
    """Polynomial argument eta(x): x^2 on the half-line, cos 2x on (0, pi/2)."""
    x = np.asarray(x, dtype=float)
    if params.is_laguerre:
        return x * x
    return np.cos(2.0 * x)


def _check_interior(params: ModelParams, x0: float) -> float:
    lower, upper = params.domain()
    x0 = float(x0)
    if not lower < x0 < upper:
        raise ValueError(f"x0={x0!r} is outside the open domain ({lower}, {upper})")
    return x0


# envelope log-magnitudes below this are flushed to an exact zero before the
# polynomial factors are attached, keeping overflow out of the dead tail
_LOG_TINY = -690.0


def _log_bare_envelope(params: ModelParams, x):
    """log of the wall/decay factor of the eigenfunctions, excluding 1/xi."""
    x = np.asarray(x, dtype=float)
    gl = params.g + params.ell
    with np.errstate(divide="ignore", invalid="ignore"):
        if params.is_laguerre:
            return -0.5 * x * x + gl * np.log(x)
        hl = params.h + params.ell
        return gl * np.log(np.sin(x)) + hl * np.log(np.cos(x))


def prepotential(params: ModelParams, x):
    """w(x) with exp(w) proportional to the zero mode of the family."""
    eta = eta_map(params, x)
    ratio = xpoly.xi(params, eta, shift=1) / xpoly.xi(params, eta, shift=0)
    if np.any(ratio <= 0.0):
        raise ValueError(
            f"deformation ratio not positive on the given points for {params}"
        )
    return _log_bare_envelope(params, x) + np.log(ratio)


def drift_potential(params: ModelParams, x):
    """Drift potential U(x) = -2 w(x), the landscape plotted per family."""
    return -2.0 * prepotential(params, x)


def drift(params: ModelParams, x):
    """Drift coefficient D1(x) = 2 w'(x) = -U'(x); diffusion is constant 1."""
    x = np.asarray(x, dtype=float)
    eta = eta_map(params, x)
    ratio_diff = xpoly.xi_log_deriv_diff(params, eta)
    gl = params.g + params.ell
    if params.is_laguerre:
        return -2.0 * x + 2.0 * gl / x + 4.0 * x * ratio_diff
    hl = params.h + params.ell
    # d(eta)/dx = -2 sin 2x, so the deformation term carries -4 sin 2x
    # once the overall factor 2 of D1 = 2 w' is applied.
    return (2.0 * gl / np.tan(x) - 2.0 * hl * np.tan(x)
            - 4.0 * np.sin(2.0 * x) * ratio_diff)


def eigenvalue(params: ModelParams, n: int) -> float:
    """Relaxation rate E_n of mode n (0 for the stationary mode)."""
    return xpoly.energy(params, n)


def eigenfunction_table(params: ModelParams, n_max: int, x) -> np.ndarray:
    """Orthonormal eigenfunctions phi_n(x) for all n = 0..n_max, stacked."""
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    log_env = _log_bare_envelope(params, flat)
    alive = log_env > _LOG_TINY
    out = np.zeros((n_max + 1, flat.size))
    if np.any(alive):
        xa = flat[alive]
        eta = eta_map(params, xa)
        tab = xpoly.x_polynomial_table(params, n_max, eta)
        env = np.exp(log_env[alive]) / xpoly.xi(params, eta, shift=0)
        norms = np.array([xpoly.normalization(params, n) for n in range(n_max + 1)])
        out[:, alive] = norms[:, None] * env * tab
    return out.reshape((n_max + 1,) + x.shape)


def eigenfunction(params: ModelParams, n: int, x):
    """Orthonormal eigenfunction phi_n(x) of mode n."""
    return eigenfunction_table(params, n, np.asarray(x, dtype=float))[n]


def stationary_pdf(params: ModelParams, x):
    """Stationary density: squared normalized zero mode."""
    phi0 = eigenfunction(params, 0, x)
    return phi0 * phi0


def _delta_series(params: ModelParams, x0: float, t: float, x, n_terms: int,
                  d_dt: bool):
    """Mode sum for a point source released at x0; returns (values, tail)."""
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    log_env2 = 2.0 * _log_bare_envelope(params, flat)
    alive = log_env2 > _LOG_TINY
    values = np.zeros(flat.size)
    tail = np.zeros(flat.size, dtype=bool)
    if np.any(alive):
        eta = eta_map(params, flat[alive])
        eta0 = float(eta_map(params, x0))
        tab = xpoly.x_polynomial_table(params, n_terms - 1,
                                       np.concatenate([eta, [eta0]]))
        p_x = tab[:, :-1]
        p_x0 = tab[:, -1:]

        energies = np.array([xpoly.energy(params, n) for n in range(n_terms)])
        norms2 = np.array([xpoly.normalization(params, n) ** 2 for n in range(n_terms)])
        weight = norms2 * np.exp(-energies * t)
        if d_dt:
            weight = weight * (-energies)

        terms = weight[:, None] * p_x * p_x0
        series = terms.sum(axis=0)
        tail[alive] = np.abs(terms[-1]) > TAIL_RATIO * np.abs(series)

        xi_b = xpoly.xi(params, eta, shift=0)
        front = np.exp(log_env2[alive]) / (xi_b * xi_b)
        values[alive] = front * (p_x[0] / p_x0[0]) * series
    return values.reshape(x.shape), tail.reshape(x.shape)


def _resolve_terms(params: ModelParams, n_terms) -> int:
    n_terms = default_terms(params) if n_terms is None else int(n_terms)
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    return n_terms


def pdf_delta(params: ModelParams, x0: float, t: float, x, n_terms: int | None = None,
              return_tail: bool = False):
    """Density at time t > 0 of a process started as a point mass at x0.

    With return_tail=True also returns a boolean mask marking points where
    the last retained mode still exceeds 1e-10 of the partial sum (a
    non-fatal truncation warning; add terms or increase t).
    """
    if not t > 0.0:
        raise ValueError(f"pdf_delta needs t > 0, got t={t!r}")
    x0 = _check_interior(params, x0)
    n_terms = _resolve_terms(params, n_terms)
    values, tail = _delta_series(params, x0, t, x, n_terms, d_dt=False)
    if return_tail:
        return values, tail
    return values


def pdf_delta_time_derivative(params: ModelParams, x0: float, t: float, x,
                              n_terms: int | None = None):
    """Exact d/dt of pdf_delta (each mode scaled by its -E_n)."""
    if not t > 0.0:
        raise ValueError(f"time derivative needs t > 0, got t={t!r}")
    x0 = _check_interior(params, x0)
    n_terms = _resolve_terms(params, n_terms)
    values, _ = _delta_series(params, x0, t, x, n_terms, d_dt=True)
    return values


def expand_profile(params: ModelParams, x_grid, density, n_terms: int | None = None,
                   quad_nodes: int = 1024) -> np.ndarray:
    """Mode coefficients c_n of an initial density sampled on a grid.

    The integrand uses the polynomial ratio phi_n/phi_0, so no exponential
    factors enter; the density is linearly interpolated between samples and
    treated as zero outside the sampled window. c_0 must come out as the
    total mass 1 within 1e-6, else the input is rejected as not a density.
    """
    from . import quadrature

    x_grid = np.asarray(x_grid, dtype=float)
    density = np.asarray(density, dtype=float)
    if x_grid.ndim != 1 or x_grid.shape != density.shape or x_grid.size < 2:
        raise ValueError("x_grid and density must be 1-d arrays of equal length >= 2")
    if np.any(np.diff(x_grid) <= 0):
        raise ValueError("x_grid must be strictly increasing")
    lower, upper = params.domain()
    if x_grid[0] <= lower or x_grid[-1] >= upper:
        raise ValueError("x_grid must lie strictly inside the open domain")
    if np.any(density < -1e-6 * max(np.max(density), 0.0)):
        raise ValueError("density has significantly negative samples")
    n_terms = _resolve_terms(params, n_terms)

    nodes, weights = quadrature.mapped_rule(quad_nodes, x_grid[0], x_grid[-1])
    p_interp = np.interp(nodes, x_grid, density, left=0.0, right=0.0)
    eta = eta_map(params, nodes)
    tab = xpoly.x_polynomial_table(params, n_terms - 1, eta)
    norms = np.array([xpoly.normalization(params, n) for n in range(n_terms)])
    ratio = (norms[:, None] / norms[0]) * tab / tab[0]
    coeffs = ratio @ (weights * p_interp)
    if abs(coeffs[0] - 1.0) > 1e-6:
        raise ValueError(
            f"profile mass integrates to {coeffs[0]!r}, not 1 within 1e-6; "
            "not a normalized density on this grid"
        )
    return coeffs


def pdf_from_coeffs(params: ModelParams, coeffs, t: float, x):
    """Density at time t >= 0 from mode coefficients (c_0 = 1 preserves mass)."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got t={t!r}")
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size < 1:
        raise ValueError("coeffs must be a non-empty 1-d array")
    x = np.asarray(x, dtype=float)
    n_terms = coeffs.size
    flat = x.reshape(-1)
    log_env2 = 2.0 * _log_bare_envelope(params, flat)
    alive = log_env2 > _LOG_TINY
    values = np.zeros(flat.size)
    if np.any(alive):
        eta = eta_map(params, flat[alive])
        tab = xpoly.x_polynomial_table(params, n_terms - 1, eta)
        energies = np.array([xpoly.energy(params, n) for n in range(n_terms)])
        norms = np.array([xpoly.normalization(params, n) for n in range(n_terms)])
        weight = coeffs * norms * np.exp(-energies * t)
        series = np.tensordot(weight, tab, axes=(0, 0))
        xi_b = xpoly.xi(params, eta, shift=0)
        front = np.exp(log_env2[alive]) / (xi_b * xi_b)
        values[alive] = front * norms[0] * tab[0] * series
    return values.reshape(x.shape)


def _default_step(params: ModelParams) -> float:
    lower, upper = params.domain()
    width = DEFAULT_X_MAX if params.is_laguerre else upper - lower
    return width * 1e-4


def current_density(params: ModelParams, pdf_fn, t: float, x, step: float | None = None):
    """Probability current J = -U'(x) P - dP/dx for a density x, t -> P.

    pdf_fn(x_array, t) must be evaluable at x +- 2*step; the spatial
    derivative uses a 5-point stencil with that step.
    """
    x = np.asarray(x, dtype=float)
    h = _default_step(params) if step is None else float(step)
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    lower, upper = params.domain()
    if np.any(x - 2 * h <= lower) or np.any(x + 2 * h >= upper):
        raise ValueError("x +- 2*step must stay inside the open domain")
    p = pdf_fn(x, t)
    dp = (-pdf_fn(x + 2 * h, t) + 8.0 * pdf_fn(x + h, t)
          - 8.0 * pdf_fn(x - h, t) + pdf_fn(x - 2 * h, t)) / (12.0 * h)
    return drift(params, x) * p - dp


def peak_tendency(params: ModelParams, x, tol: float = 1e-10):
    """Which way a density peak at x drifts: 'left', 'right' or 'stationary'.

    Near a peak dP/dx ~ 0, so the current reduces to -U'(x) P there and its
    sign is the sign of the drift.
    """
    d = np.asarray(drift(params, x), dtype=float)
    labels = np.where(d > tol, "right", np.where(d < -tol, "left", "stationary"))
    if labels.ndim == 0:
        return str(labels)
    return labels.tolist()


def _residual_grid(params: ModelParams, n_points: int) -> np.ndarray:
    lower, upper = params.domain()
    if params.is_laguerre:
        return np.linspace(0.2, 6.0, n_points)
    width = upper - lower
    return np.linspace(lower + 0.05 * width, upper - 0.05 * width, n_points)


def eigen_residual(params: ModelParams, n: int, n_points: int = 201,
                   step: float = 1e-3) -> float:
    """Relative Schrodinger residual of mode n on an interior grid.

    The potential is reconstructed from the analytic drift (w' = D1/2, w''
    by stencil), the second derivative of phi_n by a 5-point stencil.
    """
    x = _residual_grid(params, n_points)
    h = float(step)
    e_n = eigenvalue(params, n)

    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    phi = np.stack([eigenfunction(params, n, x + o) for o in offsets])
    d2phi = (-phi[0] + 16.0 * phi[1] - 30.0 * phi[2] + 16.0 * phi[3] - phi[4]) / (12.0 * h * h)

    hw = 1e-4
    wp = 0.5 * drift(params, x)
    wp_sh = [0.5 * drift(params, x + o) for o in np.array([-2.0, -1.0, 1.0, 2.0]) * hw]
    wpp = (-wp_sh[3] + 8.0 * wp_sh[2] - 8.0 * wp_sh[1] + wp_sh[0]) / (12.0 * hw)
    v = wp * wp + wpp

    resid = -d2phi + (v - e_n) * phi[2]
    denom = np.max(np.abs(d2phi) + np.abs(v * phi[2]) + abs(e_n) * np.abs(phi[2]))
    return float(np.max(np.abs(resid)) / denom)


def fpe_residual(params: ModelParams, x0: float, t: float,
                 n_terms: int | None = None, n_points: int = 301) -> float:
    """Max Fokker-Planck residual of pdf_delta, relative to max P.

    Checks dP/dt = d/dx(U' P) + d2P/dx2 with the time derivative taken
    mode-exactly and spatial derivatives by 5-point stencils.
    """
    x = _residual_grid(params, n_points)
    h = _default_step(params)
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h

    p = np.stack([pdf_delta(params, x0, t, x + o, n_terms) for o in offsets])
    dp_dt = pdf_delta_time_derivative(params, x0, t, x, n_terms)
    d2p = (-p[0] + 16.0 * p[1] - 30.0 * p[2] + 16.0 * p[3] - p[4]) / (12.0 * h * h)

    flux = np.stack([-drift(params, x + o) * p[i] for i, o in enumerate(offsets)])
    dflux = (-flux[4] + 8.0 * flux[3] - 8.0 * flux[1] + flux[0]) / (12.0 * h)

    resid = dp_dt - dflux - d2p
    return float(np.max(np.abs(resid)) / np.max(np.abs(p[2])))
