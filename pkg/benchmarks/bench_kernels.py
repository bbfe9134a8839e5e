"""Timing comparison of the pure-Python and compiled kernels.

Runs the (edge, triangle) enumeration table and a batch of Glauber sweeps
through both backends, checks they agree, and prints the timings. Usage:

    python3 benchmarks/bench_kernels.py [--table-n 7] [--sweeps 300] [--chain-n 40]
"""

import argparse
import time

import numpy as np

from ergmphase._kernels import pure
from ergmphase.graphs import node_pairs

try:
    from ergmphase._kernels import _speedups
except ImportError:
    _speedups = None


def time_call(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_table(mod, n):
    return time_call(lambda: mod.triangle_table(n), repeat=1 if n >= 7 else 3)


def bench_sweeps(mod, n, sweeps, seed=0):
    pairs = node_pairs(n)
    npairs = len(pairs)
    pi_map = np.fromiter((a for a, _ in pairs), dtype=np.int64, count=npairs)
    pj_map = np.fromiter((b for _, b in pairs), dtype=np.int64, count=npairs)
    rng = np.random.default_rng(seed)
    pids = rng.integers(0, npairs, size=(sweeps, npairs))
    unifs = rng.random((sweeps, npairs))

    def run():
        state = mod.make_state([0] * n, n)
        e_count, tri_count, accepted = 0, 0, 0
        for s in range(sweeps):
            e_count, tri_count, acc = mod.sweep_triangle(
                state, n, 0.2, -3.0 / n, pi_map[pids[s]], pj_map[pids[s]],
                unifs[s], e_count, tri_count,
            )
            accepted += acc
        return e_count, tri_count, accepted

    return time_call(run)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--table-n", type=int, default=7)
    ap.add_argument("--sweeps", type=int, default=300)
    ap.add_argument("--chain-n", type=int, default=40)
    args = ap.parse_args()

    backends = [("pure", pure)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled backend not available; timing pure only")

    print(f"\ntriangle_table(n={args.table_n})")
    tables = {}
    for name, mod in backends:
        elapsed, table = bench_table(mod, args.table_n)
        tables[name] = table
        print(f"  {name:>8}: {elapsed * 1e3:10.1f} ms")
    if len(tables) == 2:
        assert np.array_equal(tables["pure"], tables["compiled"])
        print("  tables agree")

    print(f"\nsweep_triangle(n={args.chain_n}, sweeps={args.sweeps})")
    results = {}
    times = {}
    for name, mod in backends:
        elapsed, result = bench_sweeps(mod, args.chain_n, args.sweeps)
        results[name] = result
        times[name] = elapsed
        updates = args.sweeps * len(node_pairs(args.chain_n))
        print(f"  {name:>8}: {elapsed * 1e3:10.1f} ms"
              f"  ({updates / elapsed / 1e6:.1f}M updates/s)")
    if len(results) == 2:
        assert results["pure"] == results["compiled"]
        print(f"  results agree; speedup {times['pure'] / times['compiled']:.1f}x")


if __name__ == "__main__":
    main()
