"""Build clustering instances from triangle-free graphs and check the cover costs.

For each generated graph: exact minimum cover size k, the measured k-means,
k-medians and centroid-k-centers costs of the cover-induced tree, and the
closed-form k-means prediction |E| - k.
"""

import argparse

from explainclust.objectives import KCENTERS, KMEANS, KMEDIANS, centroid, cost
from explainclust.oracles import min_vertex_cover
from explainclust.reductions import cover_to_tree, edges_to_points, generate_graph, predicted_kmeans_cost
from explainclust.tree import induced_partition


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=10)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--m", type=int, default=20)
    ap.add_argument("--max-degree", type=int, default=3)
    args = ap.parse_args()

    print(f"{'seed':>4} {'|E|':>4} {'k':>3} {'kmeans':>8} {'|E|-k':>6} {'kmedians':>9} {'kcenters':>9}")
    for seed in range(args.graphs):
        g = generate_graph("random-B-bounded-triangle-free", seed=seed, n=args.n, m=args.m,
                           max_degree=args.max_degree)
        cover = list(min_vertex_cover(g))
        inst = edges_to_points(g)
        part = induced_partition(cover_to_tree(inst, cover), inst.dataset)
        reps = [centroid(c, inst.dataset) for c in part.clusters]
        print(f"{seed:>4} {g.m:>4} {len(cover):>3} "
              f"{cost(part, inst.dataset, KMEANS):>8.4f} {predicted_kmeans_cost(g, cover):>6.0f} "
              f"{cost(part, inst.dataset, KMEDIANS):>9.1f} "
              f"{cost(part.with_representatives(reps), inst.dataset, KCENTERS):>9.4f}")


if __name__ == "__main__":
    main()
