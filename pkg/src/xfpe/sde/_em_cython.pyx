# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Euler-Maruyama kernel.

Mirrors _em_python step for step: Philox-4x32-10 counter-based draws keyed
by (seed, path, position), Box-Muller pairs, identical boundary policies.
Kept scalar per path so the per-path draw position can advance through
boundary resamples exactly as the vectorized fallback does.
"""

from libc.math cimport sqrt, log, sin, cos, tan, INFINITY, isfinite
from libc.stdint cimport uint32_t, uint64_t, int64_t

import numpy as np

BACKEND_NAME = "cython"

cdef enum:
    FAM_LAGUERRE = 0
    FAM_JACOBI = 1
    FAM_FREE = 2
    BD_REJECT = 0

FAMILY_LAGUERRE = FAM_LAGUERRE
FAMILY_JACOBI = FAM_JACOBI
FAMILY_FREE = FAM_FREE

BOUNDARY_REJECT = BD_REJECT
BOUNDARY_REFLECT = 1

cdef double INV53 = 1.1102230246251565e-16   # 2^-53
cdef double TWO_PI = 6.283185307179586


cdef inline void _philox_block(uint64_t seed, uint64_t path, uint64_t block,
                               double* z0, double* z1) noexcept nogil:
    cdef uint32_t c0 = <uint32_t>(block & <uint64_t>0xFFFFFFFF)
    cdef uint32_t c1 = <uint32_t>(block >> 32)
    cdef uint32_t c2 = <uint32_t>(path & <uint64_t>0xFFFFFFFF)
    cdef uint32_t c3 = <uint32_t>(path >> 32)
    cdef uint32_t k0 = <uint32_t>(seed & <uint64_t>0xFFFFFFFF)
    cdef uint32_t k1 = <uint32_t>(seed >> 32)
    cdef uint64_t p0, p1, w1, w2
    cdef uint32_t hi0, lo0, hi1, lo1
    cdef double u1, u2, radius, theta
    cdef int r
    for r in range(10):
        p0 = (<uint64_t>0xD2511F53u) * c0
        p1 = (<uint64_t>0xCD9E8D57u) * c2
        hi0 = <uint32_t>(p0 >> 32)
        lo0 = <uint32_t>p0
        hi1 = <uint32_t>(p1 >> 32)
        lo1 = <uint32_t>p1
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + 0x9E3779B9u
        k1 = k1 + 0xBB67AE85u
    w1 = ((<uint64_t>c0) << 32) | c1
    w2 = ((<uint64_t>c2) << 32) | c3
    u1 = <double>((w1 >> 11) + 1) * INV53
    u2 = <double>(w2 >> 11) * INV53
    radius = sqrt(-2.0 * log(u1))
    theta = TWO_PI * u2
    z0[0] = radius * cos(theta)
    z1[0] = radius * sin(theta)


cdef inline double _polyval(const double* c, int n, double x) noexcept nogil:
    cdef double acc = c[n - 1]
    cdef int i
    for i in range(n - 2, -1, -1):
        acc = acc * x + c[i]
    return acc


cdef inline double _drift(int family, double gl, double hl,
                          const double* num, const double* dnum,
                          const double* den, const double* dden,
                          int nc, double x) noexcept nogil:
    cdef double eta, jac, base, pn, pd, ratio
    if family == FAM_FREE:
        return 0.0
    if family == FAM_LAGUERRE:
        eta = x * x
        jac = 4.0 * x
        base = -2.0 * x + 2.0 * gl / x
    else:
        eta = cos(2.0 * x)
        jac = -4.0 * sin(2.0 * x)
        base = 2.0 * gl / tan(x) - 2.0 * hl * tan(x)
    pn = _polyval(num, nc, eta)
    pd = _polyval(den, nc, eta)
    ratio = (_polyval(dnum, nc, eta) * pd - _polyval(dden, nc, eta) * pn) / (pn * pd)
    return base + jac * ratio


def run_paths(int family, double gl, double hl,
              double[::1] num, double[::1] dnum,
              double[::1] den, double[::1] dden,
              double x0, double dt, int64_t[::1] sample_steps,
              int n_paths, object seed, int boundary,
              double lower, double upper, int max_tries=100):
    """Simulate n_paths trajectories; returns (len(sample_steps), n_paths)."""
    cdef uint64_t useed = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int n_samples = sample_steps.shape[0]
    out_arr = np.empty((n_samples, n_paths))
    cdef double[:, ::1] out = out_arr
    cdef int nc = num.shape[0]
    cdef double sq2dt = sqrt(2.0 * dt)
    cdef int64_t total = sample_steps[n_samples - 1]

    cdef int p, s, tries
    cdef int64_t k
    cdef uint64_t pos, block, cached
    cdef bint have, bad
    cdef double x, mean, prop, z, z0, z1
    cdef int bad_path = -1
    cdef int64_t bad_step = -1
    cdef int bad_kind = 0  # 1 = resample budget, 2 = reflect budget, 3 = non-finite

    with nogil:
        for p in range(n_paths):
            x = x0
            pos = 0
            cached = 0
            have = 0
            s = 0
            for k in range(total):
                mean = x + _drift(family, gl, hl, &num[0], &dnum[0],
                                  &den[0], &dden[0], nc, x) * dt
                block = pos >> 1
                if (not have) or block != cached:
                    _philox_block(useed, <uint64_t>p, block, &z0, &z1)
                    cached = block
                    have = 1
                z = z1 if (pos & 1) else z0
                pos = pos + 1
                prop = mean + sq2dt * z
                if boundary == BD_REJECT:
                    tries = 1
                    while not (prop > lower and prop < upper) and tries < max_tries:
                        block = pos >> 1
                        if block != cached:
                            _philox_block(useed, <uint64_t>p, block, &z0, &z1)
                            cached = block
                        z = z1 if (pos & 1) else z0
                        pos = pos + 1
                        prop = mean + sq2dt * z
                        tries = tries + 1
                    if not (prop > lower and prop < upper):
                        bad_path = p
                        bad_step = k
                        bad_kind = 1
                        break
                else:
                    tries = 0
                    while not (prop > lower and prop < upper) and tries < max_tries:
                        if prop <= lower:
                            prop = 2.0 * lower - prop
                        elif prop >= upper:
                            prop = 2.0 * upper - prop
                        tries = tries + 1
                    if not (prop > lower and prop < upper):
                        bad_path = p
                        bad_step = k
                        bad_kind = 2
                        break
                x = prop
                if not isfinite(x):
                    bad_path = p
                    bad_step = k + 1
                    bad_kind = 3
                    break
                if k + 1 == sample_steps[s]:
                    out[s, p] = x
                    s = s + 1
            if bad_kind != 0:
                break

    if bad_kind == 1:
        raise RuntimeError(
            f"path {bad_path} exhausted {max_tries} boundary resamples at step {bad_step}"
        )
    if bad_kind == 2:
        raise RuntimeError(
            f"path {bad_path} could not be reflected into the domain at step {bad_step}"
        )
    if bad_kind == 3:
        raise RuntimeError(f"path {bad_path} became non-finite at step {bad_step}")
    return out_arr
