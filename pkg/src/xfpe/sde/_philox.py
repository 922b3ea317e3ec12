"""Counter-based normal variates: Philox-4x32-10 plus Box-Muller.

normal(seed, path, position) is a pure function, so simulated paths are
reproducible independent of chunking, vectorization or evaluation order.
Each counter block yields two normals; draw `position` selects the block
(position >> 1) and the member (position & 1). The compiled kernel
implements the identical construction scalar-wise.
"""

from __future__ import annotations

import numpy as np

_M0 = 0xD2511F53
_M1 = 0xCD9E8D57
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = 0xFFFFFFFF
_INV53 = float(2.0 ** -53)
_TWO_PI = 2.0 * np.pi


def philox_words(seed: int, paths: np.ndarray, blocks: np.ndarray):
    """Four 32-bit output words (as uint64 arrays) of Philox-4x32-10.

    The 128-bit counter is (block low/high, path low/high); the 64-bit key
    is the seed.
    """
    paths = np.asarray(paths, dtype=np.uint64)
    blocks = np.asarray(blocks, dtype=np.uint64)
    c0 = blocks & _MASK32
    c1 = blocks >> np.uint64(32)
    c2 = paths & _MASK32
    c3 = paths >> np.uint64(32)
    k0 = int(seed) & _MASK32
    k1 = (int(seed) >> 32) & _MASK32
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> np.uint64(32)
        lo0 = p0 & _MASK32
        hi1 = p1 >> np.uint64(32)
        lo1 = p1 & _MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


def normals(seed: int, paths: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Standard normal draws for (path, position) pairs under one seed."""
    positions = np.asarray(positions, dtype=np.uint64)
    w0, w1, w2, w3 = philox_words(seed, paths, positions >> np.uint64(1))
    bits1 = ((w0 << np.uint64(32)) | w1) >> np.uint64(11)
    bits2 = ((w2 << np.uint64(32)) | w3) >> np.uint64(11)
    u1 = (bits1 + np.uint64(1)).astype(np.float64) * _INV53  # in (0, 1]
    u2 = bits2.astype(np.float64) * _INV53                   # in [0, 1)
    radius = np.sqrt(-2.0 * np.log(u1))
    theta = _TWO_PI * u2
    odd = (positions & np.uint64(1)).astype(bool)
    return np.where(odd, radius * np.sin(theta), radius * np.cos(theta))
