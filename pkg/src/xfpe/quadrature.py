"""Gauss-Legendre quadrature with finite and semi-infinite mappings.

Nodes and weights are computed from scratch by Newton iteration on the
Legendre recurrence; rules are cached by size. Semi-infinite integrals use
the rational substitution x = a + u/(1-u), which handles the Gaussian-tail
integrands of the half-line families well.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureRule",
    "gauss_legendre_rule",
    "mapped_rule",
    "semi_infinite_rule",
    "integrate",
    "integrate_semi_infinite",
    "orthonormality_matrix",
]

MAX_NODES = 4096
DEFAULT_NODES = 512

# relative clip applied to the angular domain before integrating, keeping
# evaluations off the walls (design: eps = width * 1e-12)
_JACOBI_CLIP = 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    """Evaluation-ready rule: f(nodes) @ weights approximates the integral.

    mapping records how the reference Gauss-Legendre rule was transformed:
    'identity' for a finite interval, 'semi_infinite_exp' for the rational
    half-line substitution.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mapping: str
    order: int


@lru_cache(maxsize=64)
def _legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Reference nodes/weights on (-1, 1) by Newton iteration."""
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        pm, p = np.zeros_like(x), np.ones_like(x)
        for j in range(1, n + 1):
            pm, p = p, ((2 * j - 1) * x * p - (j - 1) * pm) / j
        dp = n * (x * p - pm) / (x * x - 1.0)
        dx = -p / dp
        x = x + dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    pm, p = np.zeros_like(x), np.ones_like(x)
    for j in range(1, n + 1):
        pm, p = p, ((2 * j - 1) * x * p - (j - 1) * pm) / j
    dp = n * (x * p - pm) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce the exact symmetry the analytic rule has
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return x[order], w[order]


def _check_order(n: int) -> int:
    if int(n) != n or not 1 <= n <= MAX_NODES:
        raise ValueError(f"rule size must be an integer in [1, {MAX_NODES}], got {n!r}")
    return int(n)


def gauss_legendre_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on the reference interval (-1, 1)."""
    n = _check_order(n)
    x, w = _legendre_nodes(n)
    return QuadratureRule(nodes=x.copy(), weights=w.copy(), mapping="identity", order=n)


def mapped_rule(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights transplanted to the finite interval (a, b)."""
    n = _check_order(n)
    a, b = float(a), float(b)
    if not b > a:
        raise ValueError(f"need b > a, got a={a!r}, b={b!r}")
    x, w = _legendre_nodes(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def semi_infinite_rule(n: int, a: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for (a, inf) via x = a + u/(1-u) on u in (0, 1)."""
    n = _check_order(n)
    a = float(a)
    u, wu = mapped_rule(n, 0.0, 1.0)
    denom = 1.0 - u
    return a + u / denom, wu / (denom * denom)


def integrate(f, a: float, b: float, rule: QuadratureRule | None = None):
    """Integral of f over (a, b) with an error estimate from rule doubling.

    Args:
        f: vectorized callable of one array argument.
        a, b: finite interval endpoints, b > a.
        rule: base rule; its size n is compared against 2n. Defaults to the
            512-point rule.

    Returns:
        (value, error_estimate): the 2n-rule value and |value_2n - value_n|.
    """
    n = DEFAULT_NODES if rule is None else rule.order
    xs, ws = mapped_rule(n, a, b)
    coarse = float(np.dot(ws, f(xs)))
    xs2, ws2 = mapped_rule(min(2 * n, MAX_NODES), a, b)
    fine = float(np.dot(ws2, f(xs2)))
    return fine, abs(fine - coarse)


def integrate_semi_infinite(f, a: float, rule: QuadratureRule | None = None):
    """Integral of f over (a, inf); same return convention as integrate()."""
    n = DEFAULT_NODES if rule is None else rule.order
    xs, ws = semi_infinite_rule(n, a)
    coarse = float(np.dot(ws, f(xs)))
    xs2, ws2 = semi_infinite_rule(min(2 * n, MAX_NODES), a)
    fine = float(np.dot(ws2, f(xs2)))
    return fine, abs(fine - coarse)


def _eigen_quad_points(params, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    lower, upper = params.domain()
    if params.is_laguerre:
        return semi_infinite_rule(n_nodes, lower)
    clip = (upper - lower) * _JACOBI_CLIP
    return mapped_rule(n_nodes, lower + clip, upper - clip)


def orthonormality_matrix(params, n_max: int, n_nodes: int = 1024) -> np.ndarray:
    """Gram matrix of the first n_max+1 eigenfunctions under quadrature.

    Returns an (n_max+1, n_max+1) array that should be the identity to the
    rule's accuracy; deviations diagnose normalization or family errors.
    n_max is capped at 20 to keep the polynomial degrees inside the rule's
    exactness range.
    """
    from . import spectral

    if int(n_max) != n_max or not 0 <= n_max <= 20:
        raise ValueError(f"n_max must be an integer in [0, 20], got {n_max!r}")
    xs, ws = _eigen_quad_points(params, _check_order(n_nodes))
    phi = spectral.eigenfunction_table(params, int(n_max), xs)
    return (phi * ws) @ phi.T
