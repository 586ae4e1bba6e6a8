#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import random
import time

import numpy as np

from testscribe import _kernels_py

try:
    from testscribe import _speedups
except ImportError:
    _speedups = None


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lcs(repeats):
    rng = random.Random(0)
    rows = []
    for size in (100, 400, 1600):
        a = [rng.randrange(50) for _ in range(size)]
        b = [rng.randrange(50) for _ in range(size)]
        pure = time_call(_kernels_py.lcs_length, a, b, repeats=repeats)
        row = {"kernel": f"lcs {size}x{size}", "pure_s": pure}
        if _speedups is not None:
            an = np.asarray(a, dtype=np.intc)
            bn = np.asarray(b, dtype=np.intc)
            row["compiled_s"] = time_call(_speedups.lcs_length, an, bn,
                                          repeats=repeats)
        rows.append(row)
    return rows


def bench_pairs(repeats):
    rng = random.Random(1)
    rows = []
    for n_nodes, n_terms in ((500, 120), (2000, 400), (8000, 1200)):
        parents = [-1]
        depths = [0]
        for i in range(1, n_nodes):
            p = rng.randrange(i)
            parents.append(p)
            depths.append(depths[p] + 1)
        terminals = sorted(rng.sample(range(n_nodes), n_terms))
        pure = time_call(_kernels_py.admissible_pairs, parents, depths,
                         terminals, 9, repeats=repeats)
        row = {"kernel": f"pairs {n_terms} terminals", "pure_s": pure}
        if _speedups is not None:
            pn = np.asarray(parents, dtype=np.intc)
            dn = np.asarray(depths, dtype=np.intc)
            tn = np.asarray(terminals, dtype=np.intc)
            row["compiled_s"] = time_call(_speedups.admissible_pairs,
                                          pn, dn, tn, 9, repeats=repeats)
        rows.append(row)
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not built; timing the fallback only\n")

    print(f"{'kernel':<24} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for row in bench_lcs(args.repeats) + bench_pairs(args.repeats):
        pure = row["pure_s"]
        if "compiled_s" in row:
            comp = row["compiled_s"]
            print(f"{row['kernel']:<24} {pure * 1e3:>10.2f}ms "
                  f"{comp * 1e3:>10.2f}ms {pure / comp:>8.1f}x")
        else:
            print(f"{row['kernel']:<24} {pure * 1e3:>10.2f}ms "
                  f"{'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
