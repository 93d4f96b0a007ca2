"""Sweep file counts and fan-outs; compare measured lookup costs with
log_k(n) descent depth and the (n+1)/2 flat-scan expectation.

    python scripts/complexity_sweep.py --n 100 1000 10000 --k 5 10 --queries 5000
"""

import argparse
import math
import time

from treefold.toolkit.bench import BenchConfig, bench_report


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10_000])
    parser.add_argument("--k", type=int, nargs="+", default=[10])
    parser.add_argument("--queries", type=int, default=5000)
    parser.add_argument("--workload", choices=["uniform", "zipf"], default="uniform")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cols = "n k log_k(n) depth flat_cmp (n+1)/2 tree_str_cmp ratio cached_fetch secs"
    print(cols)
    for k in args.k:
        for n in args.n:
            t0 = time.perf_counter()
            r = bench_report(BenchConfig(n=n, k=k, queries=args.queries, workload=args.workload, seed=args.seed))
            depth = r.mean("tree", "directory_fetches")
            flat = r.mean("flat", "path_comparisons")
            tree = r.mean("tree", "string_comparisons")
            print(
                f"{n} {k} {math.log(n, k):.2f} {depth:.2f} {flat:.1f} {(n + 1) / 2:.1f} "
                f"{tree:.2f} {flat / tree:.1f} {r.mean('cached', 'directory_fetches'):.3f} "
                f"{time.perf_counter() - t0:.1f}"
            )


if __name__ == "__main__":
    main()
