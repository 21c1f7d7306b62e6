"""Compare greedy max-spacing against the exhaustive explainable optimum.

Prints, for every (n, d) bucket, how many iterations were checked and the
largest absolute gap between the greedy spacing and the optimum.
"""

import argparse
import collections
import time

import numpy as np

from explainclust import Dataset, SPACING, fit
from explainclust.oracles import optimal_explainable_profile, unrestricted_max_spacing


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--datasets", type=int, default=200)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    stats = collections.defaultdict(lambda: [0, 0.0, 0.0])
    start = time.perf_counter()
    for _ in range(args.datasets):
        n = int(rng.integers(args.k, args.max_n + 1))
        d = int(rng.integers(1, 4))
        ds = Dataset(rng.uniform(size=(n, d)))
        profile = optimal_explainable_profile(ds, args.k, SPACING)
        _, trace = fit(ds, args.k)
        row = stats[(n, d)]
        for i, value in enumerate(trace.spacings, start=1):
            row[0] += 1
            row[1] = max(row[1], abs(value - profile[i + 1].cost))
        row[2] = max(row[2], unrestricted_max_spacing(ds, args.k) / profile[args.k].cost)

    print(f"{'n':>3} {'d':>2} {'iters':>6} {'max|gap|':>10} {'max price':>10}")
    for (n, d), (iters, gap, price) in sorted(stats.items()):
        print(f"{n:>3} {d:>2} {iters:>6} {gap:>10.3g} {price:>10.4f}")
    print(f"{args.datasets} datasets in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
