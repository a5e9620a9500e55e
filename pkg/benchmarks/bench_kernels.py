"""Benchmark the compiled kernels against the pure-NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from workerlens._kernels import backends


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_split(mods, repeats):
    rng = np.random.default_rng(0)
    print(f"{'split_search':<28}" + "".join(f"{name:>12}" for name in mods)
          + f"{'speedup':>10}")
    for n, d in ((1_000, 10), (10_000, 20), (50_000, 20)):
        X = rng.normal(size=(n, d))
        y = (X[:, 0] + 0.3 * rng.normal(size=n) > 0).astype(np.int64)
        w = np.ones(n)
        feats = np.arange(d, dtype=np.int64)
        times = {}
        for name, mod in mods.items():
            times[name] = bench(lambda m=mod: m.split_search(X, y, w, feats, 1), repeats)
        row = f"n={n:>6} d={d:<3}" + " " * 10
        row += "".join(f"{times[name] * 1e3:>10.1f}ms" for name in mods)
        if len(times) == 2:
            row += f"{times['pure'] / times['native']:>9.1f}x"
        print(row)


def bench_smo(mods, repeats):
    rng = np.random.default_rng(1)
    print(f"\n{'smo_solve':<28}" + "".join(f"{name:>12}" for name in mods)
          + f"{'speedup':>10}")
    for n in (100, 300, 600):
        half = n // 2
        X = np.vstack([rng.normal(-1.0, 0.9, (half, 4)), rng.normal(1.0, 0.9, (half, 4))])
        y = np.r_[-np.ones(half), np.ones(half)]
        K = X @ X.T
        times = {}
        for name, mod in mods.items():
            times[name] = bench(lambda m=mod: m.smo_solve(K, y, 1.0, 1e-3, 1e-8, 10**6),
                                repeats)
        row = f"n={n:<6}" + " " * 16
        row += "".join(f"{times[name] * 1e3:>10.1f}ms" for name in mods)
        if len(times) == 2:
            row += f"{times['pure'] / times['native']:>9.1f}x"
        print(row)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    mods = backends()
    print("backends available:", ", ".join(mods))
    bench_split(mods, args.repeats)
    bench_smo(mods, args.repeats)


if __name__ == "__main__":
    main()
