"""Time the numba and numpy window-scan backends on null sweeps.

    python3 benchmarks/bench_kernels.py --T 66 --paths 200
"""

import argparse
import time

import numpy as np

from radf import _kernels_numba, _kernels_numpy
from radf.critical import null_paths


def bench(fn, paths, w, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(paths, w, 0, True, False)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=int, default=66)
    ap.add_argument("--paths", type=int, default=200)
    ap.add_argument("--min-window", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    paths = null_paths(args.T, args.paths, seed=1)
    w = args.min_window
    # compile outside the timed region
    _kernels_numba.null_sweep(paths[:2], w, 0, True, False)

    n_windows = args.paths * (args.T - w + 1) * (args.T - w + 2) // 2
    print(f"T={args.T} w={w} paths={args.paths}: {n_windows} regressions per GSADF sweep")
    results = {}
    for name, mod in (("numba", _kernels_numba), ("numpy", _kernels_numpy)):
        for kind, fn in (("sadf", mod.prefix_sweep), ("gsadf", mod.null_sweep)):
            secs, out = bench(fn, paths, w, args.repeat)
            results[name, kind] = out
            print(f"  {name:<6} {kind:<6} {secs:8.3f} s")
    diff = np.max(np.abs(results["numba", "gsadf"][1] - results["numpy", "gsadf"][1]))
    print(f"  max |numba - numpy| GSADF: {diff:.2e}")


if __name__ == "__main__":
    main()
