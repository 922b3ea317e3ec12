"""Compare the compiled stepping kernel against the pure-python fallback.

Runs the same workload through both backends, reports path-steps/s and the
speedup, and cross-checks that the sampled endpoints agree (both backends
consume identical counter-based draws, so differences are libm ulps only).

Usage: python benchmarks/bench_kernel.py [--paths N] [--steps N]
"""

import argparse
import time

import numpy as np

from xfpe import ModelParams
from xfpe import sde


def run(backend, params, x0, cfg):
    t0 = time.perf_counter()
    out = sde.simulate(params, x0, cfg, backend=backend)
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=2000)
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=99)
    args = ap.parse_args()

    params = ModelParams(family="L1", g=0.5, h=None, ell=5)
    dt = 1e-4
    cfg = sde.SdeConfig(dt=dt, n_paths=args.paths,
                        t_samples=[args.steps * dt], seed=args.seed)
    work = args.paths * args.steps

    print(f"workload: {args.paths} paths x {args.steps} steps (L1 drift, ell=5)")
    try:
        out_c, el_c = run("cython", params, 1.2, cfg)
    except ImportError:
        print("compiled kernel not built; only the python fallback is available")
        out_c = None
    else:
        print(f"cython:  {el_c:8.2f} s   {work / el_c:.3e} path-steps/s")

    # keep the fallback timing affordable: scale paths down, same step count
    py_paths = max(50, args.paths // 20)
    cfg_py = sde.SdeConfig(dt=dt, n_paths=py_paths,
                           t_samples=[args.steps * dt], seed=args.seed)
    out_p, el_p = run("python", params, 1.2, cfg_py)
    rate_p = py_paths * args.steps / el_p
    print(f"python:  {el_p:8.2f} s   {rate_p:.3e} path-steps/s "
          f"({py_paths} paths)")

    if out_c is not None:
        print(f"speedup: x{(work / el_c) / rate_p:.1f}")
        dev = float(np.max(np.abs(out_c[:, :py_paths] - out_p)))
        print(f"sample agreement (shared {py_paths} paths): max |diff| = {dev:.3e}")


if __name__ == "__main__":
    main()
