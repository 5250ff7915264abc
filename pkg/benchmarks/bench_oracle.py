"""Time the compiled and pure-Python classifiers on a full sweep and check they agree.

    python3 benchmarks/bench_oracle.py --n 6 --repeat 3
"""

import argparse
import time

import numpy as np

from spgraphs.oracle import _pure

try:
    from spgraphs.oracle import _core
except ImportError:
    _core = None


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6, help="vertices (all 2^(n(n-1)/2) graphs are classified)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cross-check", action="store_true", help="run both K4 tests on every graph")
    args = ap.parse_args(argv)

    masks = 1 << (args.n * (args.n - 1) // 2)
    print(f"n={args.n}: {masks} edge masks, cross_check={args.cross_check}")
    tp, (fp, cp, _) = best_time(lambda: _pure.classify_range(args.n, args.cross_check), args.repeat)
    print(f"pure      {tp:9.4f} s  {masks / tp:12.0f} graphs/s")
    if _core is None:
        print("compiled  unavailable (extension not built)")
        return
    tc, (fc, cc, _) = best_time(lambda: _core.classify_range(args.n, args.cross_check), args.repeat)
    print(f"compiled  {tc:9.4f} s  {masks / tc:12.0f} graphs/s")
    same = np.array_equal(np.asarray(fp), np.asarray(fc)) and np.array_equal(np.asarray(cp), np.asarray(cc))
    print(f"speedup   {tp / tc:9.1f}x  outputs identical: {same}")
    if not same:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
