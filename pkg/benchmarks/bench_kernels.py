"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both backends get the same
inputs, so the outputs are also compared before anything is timed.
"""

import argparse
import random
import sys
import time

import numpy as np

from comic import _pykernel as py
from comic.comic import ComicConfig, SeedAssignment, seed_masks
from comic.graph import DirectedGraph, fix_tiebreak
from comic.oneshot import OneShotParams, seed_vector

try:
    from comic import _ckernel as ck
except ImportError:  # extension not built
    ck = None


def make_graph(n, edge_p, seed):
    rng = random.Random(seed)
    edges = [(s, d, rng.choice((0.3, 0.6, 1.0))) for s in range(n) for d in range(n) if s != d and rng.random() < edge_p]
    return fix_tiebreak(DirectedGraph(n, tuple(edges)), seed)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(runs):
    big = make_graph(400, 0.02, 1)
    cfg = ComicConfig.make(0.3, 0.4, 0.8, 0.7, "complementary", True)
    is_a, is_b = seed_masks(big, SeedAssignment({0, 1, 2}, {3, 4}))
    u = np.random.default_rng(0).random((runs, big.edge_count + 4 * big.node_count + 1))
    yield (f"comic_batch n=400 runs={runs}",
           lambda m: m.comic_batch(big.arrays, is_a, is_b, cfg.kernel_params(), True, u))

    q = np.array([0.6, 0.8])
    si = seed_vector(big, SeedAssignment({0, 1}, {2, 3}), OneShotParams([0.6, 0.8]))
    u1 = np.random.default_rng(1).random((runs, big.edge_count + big.node_count + 1))
    yield f"oneshot_batch n=400 runs={runs}", lambda m: m.oneshot_batch(big.arrays, si, q, u1)

    small = make_graph(9, 0.3, 2)
    cfg2 = ComicConfig.make(0.5, 0.5, 0.25, 0.25, "competing")
    sa, sb = seed_masks(small, SeedAssignment({0}, {1}))
    yield (f"comic_exact n=9 m={small.edge_count}",
           lambda m: m.comic_exact(small.arrays, sa, sb, cfg2.kernel_params(), False, 10**7))

    si2 = seed_vector(small, SeedAssignment({0}, {1}), OneShotParams([0.6, 0.8]))
    yield f"oneshot_exact n=9 m={small.edge_count}", lambda m: m.oneshot_exact(small.arrays, si2, q, 10**7)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, (int, float)):
        return a == b
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), atol=1e-12, rtol=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if ck is None:
        print("compiled kernel not available; build with pip install -e . --no-build-isolation")
        return 1
    print(f"{'kernel':<32} {'python s':>10} {'cython s':>10} {'speedup':>8}  match")
    for name, fn in cases(args.runs):
        ok = same(fn(py), fn(ck))
        tp, tc = best_of(lambda: fn(py), args.repeat), best_of(lambda: fn(ck), args.repeat)
        print(f"{name:<32} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x  {'yes' if ok else 'NO'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
