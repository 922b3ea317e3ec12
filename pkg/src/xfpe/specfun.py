"""Special-function building blocks: log-gamma and the classical
Laguerre / Jacobi polynomial families evaluated by three-term recurrence.

Parameters are allowed outside the classical ranges (negative, non-integer)
as long as the recurrence itself is non-degenerate; that regime is needed by
the deformed polynomial families built on top of this module.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "log_gamma",
    "laguerre",
    "laguerre_all",
    "laguerre_deriv",
    "laguerre_coefficients",
    "jacobi",
    "jacobi_all",
    "jacobi_deriv",
    "jacobi_coefficients",
]


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Thin validated wrapper around math.lgamma (relative accuracy well
    below 1e-13 on the positive axis, which is all this package needs).
    """
    if not np.isfinite(x) or x <= 0.0:
        raise ValueError(f"log_gamma requires finite x > 0, got x={x!r}")
    return math.lgamma(x)


def _check_degree(n: int) -> int:
    if n != int(n) or n < 0:
        raise ValueError(f"polynomial degree must be a non-negative integer, got {n!r}")
    return int(n)


def laguerre_all(n_max: int, alpha: float, x):
    """Generalized Laguerre polynomials L_k^(alpha)(x) for all k = 0..n_max.

    Parameters
    ----------
    n_max : int
        Highest degree to compute.
    alpha : float
        Family parameter; any real value is accepted.
    x : array_like
        Evaluation points.

    Returns
    -------
    ndarray of shape (n_max + 1,) + shape(x), row k holding degree k.
    """
    n_max = _check_degree(n_max)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        # (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x)."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_deriv(n: int, alpha: float, x):
    """d/dx of L_n^(alpha)(x), via d/dx L_n^(a) = -L_{n-1}^(a+1)."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.zeros_like(x)
    return -laguerre(n - 1, alpha + 1.0, x)


def laguerre_coefficients(n: int, alpha: float) -> np.ndarray:
    """Monomial coefficients of L_n^(alpha), ascending powers of x.

    Runs the same recurrence as laguerre() on coefficient vectors, so the
    two agree to rounding for the moderate degrees used here.
    """
    n = _check_degree(n)
    prev = np.zeros(n + 1)
    prev[0] = 1.0
    if n == 0:
        return prev
    cur = np.zeros(n + 1)
    cur[0] = 1.0 + alpha
    cur[1] = -1.0
    for k in range(1, n):
        nxt = (2 * k + 1 + alpha) * cur - (k + alpha) * prev
        nxt[1:] -= cur[:-1]
        prev, cur = cur, nxt / (k + 1)
    return cur


def _jacobi_step_coeffs(k: int, alpha: float, beta: float):
    """Coefficients (c, dx, d0, e) with c P_k = (dx*x + d0) P_{k-1} - e P_{k-2}.

    Raises if the leading coefficient degenerates, which only happens for
    non-classical parameter combinations.
    """
    s = alpha + beta
    c = 2.0 * k * (k + s) * (2 * k + s - 2.0)
    if c == 0.0:
        raise ValueError(
            "degenerate Jacobi recurrence: 2k(k+alpha+beta)(2k+alpha+beta-2) = 0 "
            f"at k={k} for alpha={alpha}, beta={beta}"
        )
    dx = (2 * k + s - 1.0) * (2 * k + s) * (2 * k + s - 2.0)
    d0 = (2 * k + s - 1.0) * (alpha * alpha - beta * beta)
    e = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2 * k + s)
    return c, dx, d0, e


def jacobi_all(n_max: int, alpha: float, beta: float, x):
    """Jacobi polynomials P_k^(alpha,beta)(x) for all k = 0..n_max.

    Same shape conventions as laguerre_all.
    """
    n_max = _check_degree(n_max)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n_max + 1):
        c, dx, d0, e = _jacobi_step_coeffs(k, alpha, beta)
        out[k] = ((dx * x + d0) * out[k - 1] - e * out[k - 2]) / c
    return out


def jacobi(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial P_n^(alpha,beta)(x)."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        c, dx, d0, e = _jacobi_step_coeffs(k, alpha, beta)
        prev, cur = cur, ((dx * x + d0) * cur - e * prev) / c
    return cur


def jacobi_deriv(n: int, alpha: float, beta: float, x):
    """d/dx of P_n^(alpha,beta)(x) = (n+alpha+beta+1)/2 * P_{n-1}^(alpha+1,beta+1)."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.zeros_like(x)
    return 0.5 * (n + alpha + beta + 1.0) * jacobi(n - 1, alpha + 1.0, beta + 1.0, x)


def jacobi_coefficients(n: int, alpha: float, beta: float) -> np.ndarray:
    """Monomial coefficients of P_n^(alpha,beta), ascending powers of x."""
    n = _check_degree(n)
    prev = np.zeros(n + 1)
    prev[0] = 1.0
    if n == 0:
        return prev
    cur = np.zeros(n + 1)
    cur[0] = (alpha + 1.0) - (alpha + beta + 2.0) / 2.0
    cur[1] = (alpha + beta + 2.0) / 2.0
    for k in range(2, n + 1):
        c, dx, d0, e = _jacobi_step_coeffs(k, alpha, beta)
        nxt = d0 * cur - e * prev
        nxt[1:] += dx * cur[:-1]
        prev, cur = cur, nxt / c
    return cur
