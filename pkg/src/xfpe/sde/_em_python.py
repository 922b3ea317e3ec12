"""Pure-NumPy Euler-Maruyama kernel, semantically identical to the
compiled one: same counter-based draws, same boundary handling, same
sampling schedule. Used when the extension is unavailable or forced.
"""

from __future__ import annotations

import numpy as np

from . import _philox

BACKEND_NAME = "python"

FAMILY_LAGUERRE = 0
FAMILY_JACOBI = 1
FAMILY_FREE = 2

BOUNDARY_REJECT = 0
BOUNDARY_REFLECT = 1


def _horner(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.full_like(x, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * x + c
    return acc


def _drift(family, gl, hl, num, dnum, den, dden, x):
    if family == FAMILY_FREE:
        return np.zeros_like(x)
    if family == FAMILY_LAGUERRE:
        eta = x * x
        jac = 4.0 * x
        base = -2.0 * x + 2.0 * gl / x
    else:
        eta = np.cos(2.0 * x)
        jac = -4.0 * np.sin(2.0 * x)
        base = 2.0 * gl / np.tan(x) - 2.0 * hl * np.tan(x)
    pn = _horner(num, eta)
    pd = _horner(den, eta)
    ratio = (_horner(dnum, eta) * pd - _horner(dden, eta) * pn) / (pn * pd)
    return base + jac * ratio


def run_paths(family, gl, hl, num, dnum, den, dden, x0, dt, sample_steps,
              n_paths, seed, boundary, lower, upper, max_tries=100):
    """Simulate n_paths trajectories; returns (len(sample_steps), n_paths).

    sample_steps are cumulative step counts, strictly increasing.
    """
    sample_steps = np.asarray(sample_steps, dtype=np.int64)
    out = np.empty((sample_steps.size, n_paths))
    x = np.full(n_paths, float(x0))
    path_ids = np.arange(n_paths, dtype=np.uint64)
    pos = np.zeros(n_paths, dtype=np.uint64)
    sq2dt = np.sqrt(2.0 * dt)
    next_sample = 0
    for k in range(int(sample_steps[-1])):
        mean = x + _drift(family, gl, hl, num, dnum, den, dden, x) * dt
        z = _philox.normals(seed, path_ids, pos)
        pos += np.uint64(1)
        prop = mean + sq2dt * z
        outside = ~((prop > lower) & (prop < upper))
        if boundary == BOUNDARY_REJECT:
            tries = 1
            while np.any(outside) and tries < max_tries:
                idx = np.nonzero(outside)[0]
                z = _philox.normals(seed, path_ids[idx], pos[idx])
                pos[idx] += np.uint64(1)
                prop[idx] = mean[idx] + sq2dt * z
                outside[idx] = ~((prop[idx] > lower) & (prop[idx] < upper))
                tries += 1
            if np.any(outside):
                p_bad = int(np.nonzero(outside)[0][0])
                raise RuntimeError(
                    f"path {p_bad} exhausted {max_tries} boundary resamples at step {k}"
                )
        else:
            tries = 0
            while np.any(outside) and tries < max_tries:
                prop = np.where(prop <= lower, 2.0 * lower - prop, prop)
                prop = np.where(prop >= upper, 2.0 * upper - prop, prop)
                outside = ~((prop > lower) & (prop < upper))
                tries += 1
            if np.any(outside):
                p_bad = int(np.nonzero(outside)[0][0])
                raise RuntimeError(
                    f"path {p_bad} could not be reflected into the domain at step {k}"
                )
        x = prop
        if not np.all(np.isfinite(x)):
            p_bad = int(np.nonzero(~np.isfinite(x))[0][0])
            raise RuntimeError(f"path {p_bad} became non-finite at step {k + 1}")
        if k + 1 == sample_steps[next_sample]:
            out[next_sample] = x
            next_sample += 1
    return out
