"""Empirical price of explainability on small random instances.

For each objective, reports the mean and worst ratio between the optimal
explainable and optimal unrestricted costs (inverted for spacing, so every
ratio is >= 1).
"""

import argparse

import numpy as np

from explainclust import Dataset, KCENTERS, KMEANS, KMEDIANS, SPACING
from explainclust.oracles import optimal_explainable, unrestricted_max_spacing, unrestricted_optimal


def price(ds, k, obj):
    explainable = optimal_explainable(ds, k, obj).cost
    if obj.maximize:
        return unrestricted_max_spacing(ds, k, obj.metric) / explainable
    unrestricted = unrestricted_optimal(ds, k, obj).cost
    return explainable / unrestricted if unrestricted > 0 else 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    data = [Dataset(rng.normal(size=(args.n, args.d))) for _ in range(args.trials)]
    for obj in (KMEANS, KMEDIANS, KCENTERS, SPACING):
        ratios = np.array([price(ds, args.k, obj) for ds in data])
        print(f"{obj.kind.value:>10}: mean {ratios.mean():.4f}  worst {ratios.max():.4f}")


if __name__ == "__main__":
    main()
