"""Monte Carlo integration of the model SDEs and histogram validation.

dX = D1(X) dt + sqrt(2) dW, matching the unit-diffusion Fokker-Planck
convention (the sqrt(2) is load-bearing; dropping it is the classic
mistake that halves the variance). A compiled stepping kernel is used
when available, with a NumPy fallback selected at import time; both
consume the same counter-based draws, so results are reproducible per
backend regardless of chunking or scheduling.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import quadrature, xpoly
from ..xpoly import ModelParams
from . import _em_python

_FORCE = os.environ.get("XFPE_SDE_BACKEND", "auto")
if _FORCE not in ("auto", "python", "cython"):
    raise ImportError(f"XFPE_SDE_BACKEND must be auto, python or cython, not {_FORCE!r}")

_kernel = None
if _FORCE in ("auto", "cython"):
    try:
        from . import _em_cython as _kernel
    except ImportError:
        if _FORCE == "cython":
            raise
        _kernel = None
if _kernel is None:
    _kernel = _em_python

__all__ = [
    "SdeConfig",
    "HistogramEstimate",
    "backend_name",
    "simulate",
    "histogram",
    "bin_average",
    "compare",
]


def backend_name() -> str:
    """Which stepping kernel this process selected: 'cython' or 'python'."""
    return _kernel.BACKEND_NAME


@dataclass(frozen=True)
class SdeConfig:
    """Time stepping and sampling plan for one simulation run.

    dt must resolve the first observation time (dt <= min(t_samples)/10);
    t_samples must be strictly increasing and positive; the seed is a
    64-bit unsigned integer.
    """

    dt: float
    n_paths: int
    t_samples: Sequence[float]
    seed: int
    boundary_policy: str = "reject_resample"

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        t = np.asarray(self.t_samples, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("t_samples must be a non-empty 1-d sequence")
        if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
            raise ValueError("t_samples must be strictly increasing and positive")
        if self.dt > t[0] / 10.0:
            raise ValueError(
                f"dt={self.dt} too coarse: must be <= min(t_samples)/10 = {t[0] / 10.0}"
            )
        object.__setattr__(self, "t_samples", tuple(float(v) for v in t))
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError(f"n_paths must be a positive integer, got {self.n_paths!r}")
        object.__setattr__(self, "n_paths", int(self.n_paths))
        s = int(self.seed)
        if s != self.seed or not 0 <= s < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "seed", s)
        if self.boundary_policy not in ("reject_resample", "reflect"):
            raise ValueError(
                "boundary_policy must be 'reject_resample' or 'reflect', "
                f"got {self.boundary_policy!r}"
            )

    def sample_steps(self) -> np.ndarray:
        """Cumulative step counts hitting each observation time."""
        steps = np.rint(np.asarray(self.t_samples) / self.dt).astype(np.int64)
        if steps[0] < 1 or np.any(np.diff(steps) <= 0):
            raise ValueError("t_samples do not map to distinct step counts at this dt")
        return steps


def _boundary_code(policy: str) -> int:
    return (_em_python.BOUNDARY_REJECT if policy == "reject_resample"
            else _em_python.BOUNDARY_REFLECT)


def _family_spec(params: ModelParams):
    num = np.ascontiguousarray(xpoly.xi_coefficients(params, shift=1))
    den = np.ascontiguousarray(xpoly.xi_coefficients(params, shift=0))
    # pad derivative arrays to the same length so the kernel sees one size
    size = num.size
    dnum = np.zeros(size)
    dden = np.zeros(size)
    dnum[: size - 1] = num[1:] * np.arange(1, size)
    dden[: size - 1] = den[1:] * np.arange(1, size)
    lower, upper = params.domain()
    code = (_em_python.FAMILY_LAGUERRE if params.is_laguerre
            else _em_python.FAMILY_JACOBI)
    hl = 0.0 if params.h is None else params.h + params.ell
    return code, params.g + params.ell, hl, num, dnum, den, dden, lower, upper


def simulate(params: ModelParams, x0: float, config: SdeConfig,
             backend: str | None = None) -> np.ndarray:
    """Euler-Maruyama paths of the model process started at x0.

    :param params: model family parameters (drift is derived from them).
    :param x0: starting point, strictly inside the open domain.
    :param config: stepping plan; observation times are rounded to whole
        steps of config.dt.
    :param backend: force 'python' or 'cython' for this call (default:
        the kernel selected at import).
    :return: array of shape (len(t_samples), n_paths).
    """
    lower, upper = params.domain()
    x0 = float(x0)
    if not lower < x0 < upper:
        raise ValueError(f"x0={x0!r} outside the open domain ({lower}, {upper})")
    code, gl, hl, num, dnum, den, dden, lo, up = _family_spec(params)
    kern = _pick_kernel(backend)
    return kern.run_paths(code, gl, hl, num, dnum, den, dden, x0, config.dt,
                          config.sample_steps(), config.n_paths, config.seed,
                          _boundary_code(config.boundary_policy), lo, up)


def _pick_kernel(backend: str | None):
    if backend is None:
        return _kernel
    if backend == "python":
        return _em_python
    if backend == "cython":
        from . import _em_cython
        return _em_cython
    raise ValueError(f"backend must be 'python' or 'cython', got {backend!r}")


def _simulate_zero_drift(x0: float, config: SdeConfig,
                         backend: str | None = None,
                         lower: float = -math.inf,
                         upper: float = math.inf) -> np.ndarray:
    """Test hook: free diffusion (D1 = 0), optionally boxed by boundaries."""
    one = np.array([1.0])
    zero = np.array([0.0])
    kern = _pick_kernel(backend)
    return kern.run_paths(_em_python.FAMILY_FREE, 0.0, 0.0, one, zero, one, zero,
                          float(x0), config.dt, config.sample_steps(),
                          config.n_paths, config.seed,
                          _boundary_code(config.boundary_policy),
                          float(lower), float(upper))


@dataclass(frozen=True)
class HistogramEstimate:
    """Normalized histogram with per-bin binomial standard errors.

    density integrates to exactly 1 over the binned range; samples outside
    the range are counted in n_escaped (histogram() rejects runs where
    they exceed 0.1% of the total).
    """

    bin_edges: np.ndarray
    density: np.ndarray
    std_err: np.ndarray
    n_samples: int
    n_escaped: int


def histogram(samples, bin_edges) -> HistogramEstimate:
    """Bin samples into a normalized density estimate over bin_edges."""
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.size == 0:
        raise ValueError("no samples to bin")
    edges = np.asarray(bin_edges, dtype=float).reshape(-1)
    if edges.size < 2 or np.any(np.diff(edges) <= 0.0):
        raise ValueError("bin_edges must be an increasing sequence of >= 2 edges")
    counts, _ = np.histogram(samples, bins=edges)
    n_in = int(counts.sum())
    n_escaped = samples.size - n_in
    if n_escaped > 1e-3 * samples.size:
        raise ValueError(
            f"{n_escaped} of {samples.size} samples escaped the histogram range "
            f"({edges[0]}, {edges[-1]}); exceeds the 0.1% budget"
        )
    width = np.diff(edges)
    p = counts / n_in
    density = p / width
    std_err = np.sqrt(p * (1.0 - p) / n_in) / width
    return HistogramEstimate(bin_edges=edges, density=density, std_err=std_err,
                             n_samples=samples.size, n_escaped=n_escaped)


def bin_average(edges, pdf_fn, quad_nodes: int = 16) -> np.ndarray:
    """Average pdf_fn over each bin with a per-bin Gauss-Legendre rule."""
    edges = np.asarray(edges, dtype=float)
    widths = np.diff(edges)
    rule = quadrature.gauss_legendre_rule(quad_nodes)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = mid[:, None] + 0.5 * widths[:, None] * rule.nodes[None, :]
    return pdf_fn(nodes.reshape(-1)).reshape(nodes.shape) @ (0.5 * rule.weights)


def compare(estimate: HistogramEstimate, pdf_fn, quad_nodes: int = 16):
    """Distance of a histogram from a reference density.

    pdf_fn is bin-averaged with a per-bin Gauss-Legendre rule. Returns
    (l1_distance, max_sigma_deviation); the sigma score skips empty bins
    (their binomial error estimate is zero) but they still count in l1.
    """
    widths = np.diff(estimate.bin_edges)
    avg = bin_average(estimate.bin_edges, pdf_fn, quad_nodes)
    diff = estimate.density - avg
    l1 = float(np.sum(np.abs(diff) * widths))
    ok = estimate.std_err > 0.0
    if np.any(ok):
        max_sigma = float(np.max(np.abs(diff[ok]) / estimate.std_err[ok]))
    else:
        max_sigma = math.inf
    return l1, max_sigma
