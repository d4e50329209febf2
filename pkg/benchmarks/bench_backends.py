"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--n 2000 4000] [--repeat 5]

Numba compile time is excluded by a warm-up call.  Each row also checks that
both backends return the same result.
"""
import argparse
import time

import numpy as np

from boxpierce import kernels


def rank_boxes(rng, n, d):
    lo = rng.integers(0, 4 * n, (n, d))
    hi = lo + rng.integers(0, n, (n, d))
    return lo, hi


def cases(rng, n):
    lo, hi = rank_boxes(rng, n, 2)
    lo1, hi1 = rank_boxes(rng, n, 1)
    pts = rng.integers(0, 4 * n, (64, 2))
    yield "intersect_matrix", lambda: kernels.intersect_matrix(lo[:1000], hi[:1000])
    yield "greedy_packing", lambda: kernels.greedy_packing(lo, hi, np.argsort(hi[:, 0], kind="stable"))
    yield "greedy_pairing", lambda: kernels.greedy_pairing(lo[:1000], hi[:1000])
    yield "stab_intervals", lambda: kernels.stab_intervals(lo1[:, 0], hi1[:, 0])
    yield "covered_mask", lambda: kernels.covered_mask(lo, hi, pts)
    yield "max_depth_2d", lambda: kernels.max_depth(lo[:1000], hi[:1000])


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 4000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print(f"{'kernel':<18}{'n':>7}{'numpy ms':>11}{'numba ms':>11}{'speedup':>9}  same")
    for n in args.n:
        for name, fn in cases(np.random.default_rng(args.seed), n):
            res = {}
            for b in ("numpy", "numba"):
                kernels.set_backend(b)
                fn()
                res[b] = best_of(fn, args.repeat)
            (tn, on), (tb, ob) = res["numpy"], res["numba"]
            print(f"{name:<18}{n:>7}{tn * 1e3:>11.2f}{tb * 1e3:>11.2f}{tn / max(tb, 1e-9):>9.1f}  {same(on, ob)}")


if __name__ == "__main__":
    main()
