#!/usr/bin/env python3
"""Benchmark the int64 simulation backends: numba kernel vs numpy fallback.

The kernel wins on short streaming runs where per-instruction numpy call
overhead dominates; the two converge on large batches.  The exact
(object-array) verification mode is shown once for scale.  Run:

    python3 benchmarks/bench_backends.py [--n 4] [--repeat 7]
"""

import argparse
import time

import numpy as np

import parfir as pf
from parfir import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4, help="levels (parallelism 2^n)")
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    g = pf.synthesize_hybrid(args.n)
    h = [int(v) for v in rng.integers(-8, 9, size=4 * g.L)]
    prog = _kernels.compile_program(g, h)
    have_numba = _kernels.numba_available() and _kernels.jit_enabled()

    print(f"hybrid n={args.n} (L={2**args.n}), best of {args.repeat}")
    print(f"numba path active: {have_numba} (set FFA_JIT=0 to force the numpy fallback)")
    header = f"{'blocks':>7}  {'samples':>8}  {'numpy':>11}  {'numba':>11}  {'speedup':>7}"
    print(header)
    print("-" * len(header))
    for blocks in (16, 64, 256, 1024, 4096):
        x = rng.integers(-8, 9, size=blocks * g.L).astype(np.int64)
        y_np = _kernels.run_numpy(prog, x)
        t_np = best_of(lambda: _kernels.run_numpy(prog, x), args.repeat)
        if have_numba:
            y_nb = _kernels.run_numba(prog, x)  # warms the JIT cache on first call
            assert np.array_equal(y_np, y_nb), "backend mismatch"
            t_nb = best_of(lambda: _kernels.run_numba(prog, x), args.repeat)
            nb_txt, speedup = f"{t_nb * 1e6:9.0f}us", f"{t_np / t_nb:6.1f}x"
        else:
            nb_txt, speedup = "n/a", "-"
        print(f"{blocks:>7}  {blocks * g.L:>8}  {t_np * 1e6:9.0f}us  {nb_txt:>11}  {speedup:>7}")

    x_small = [int(v) for v in rng.integers(-8, 9, size=64 * g.L)]
    t_exact = best_of(lambda: pf.simulate(g, h, x_small), 3)
    print(f"\nexact mode, 64 blocks: {t_exact * 1e3:.1f}ms "
          "(arbitrary-precision verification domain, not a throughput path)")


if __name__ == "__main__":
    main()
