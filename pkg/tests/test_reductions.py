import itertools
import math

import pytest

from explainclust.data import Dataset
from explainclust.errors import GraphError
from explainclust.objectives import KCENTERS, KMEANS, KMEDIANS, centroid, cost
from explainclust.oracles import min_vertex_cover
from explainclust.reductions import (
    Graph,
    cover_clustering,
    cover_to_tree,
    cycle_graph,
    edges_to_points,
    format_graph,
    generate_graph,
    graph_cluster_median_cost,
    grid_graph,
    is_star,
    parse_graph,
    path_graph,
    predicted_kmeans_cost,
    star_graph,
)
from explainclust.tree import Partition, induced_partition


def test_edges_to_points_examples():
    assert edges_to_points(path_graph(3)).dataset.points.tolist() == [[1, 1, 0], [0, 1, 1]]
    assert edges_to_points(Graph(2, ((1, 2),))).dataset.points.tolist() == [[1, 1]]
    pts = edges_to_points(cycle_graph(4)).dataset.points
    assert (pts.sum(axis=1) == 2).all()
    sq = {float(((a - b) ** 2).sum()) for a, b in itertools.combinations(pts, 2)}
    assert sq == {2.0, 4.0}
    with pytest.raises(GraphError):
        edges_to_points(Graph(3, ()))


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, ((1, 1),))
    with pytest.raises(GraphError):
        Graph(3, ((1, 2), (2, 1)))
    with pytest.raises(GraphError):
        Graph(3, ((1, 4),))


def test_graph_text_round_trip():
    g = generate_graph("random-3-bounded-triangle-free", seed=4, n=10, m=12)
    assert parse_graph(format_graph(g)) == g
    assert parse_graph("3 2\n1 2\n2 3\n") == path_graph(3)
    with pytest.raises(GraphError):
        parse_graph("3 2\n1 2\n")
    with pytest.raises(GraphError):
        parse_graph("3 x\n")


def test_cover_to_tree_examples():
    inst = edges_to_points(path_graph(4))
    tree = cover_to_tree(inst, [2, 3])
    assert tree.cuts()[0].dim == 1 and tree.cuts()[0].theta == 0.5
    assert induced_partition(tree, inst.dataset).clusters == ((0, 1), (2,))
    inst3 = edges_to_points(path_graph(3))
    assert induced_partition(cover_to_tree(inst3, [2]), inst3.dataset).clusters == ((0, 1),)
    star = edges_to_points(star_graph(3))
    assert induced_partition(cover_to_tree(star, [1]), star.dataset).clusters == ((0, 1, 2),)


def test_cover_to_tree_errors():
    inst = edges_to_points(path_graph(4))
    with pytest.raises(GraphError):
        cover_to_tree(inst, [2])
    with pytest.raises(GraphError):
        cover_to_tree(inst, [3, 2])


def test_predicted_kmeans_examples():
    assert predicted_kmeans_cost(path_graph(3), [2]) == 1
    assert predicted_kmeans_cost(path_graph(4), [2, 3]) == 1
    assert predicted_kmeans_cost(star_graph(3), [1]) == 2
    # centroid cross-check on the 3-path
    inst = edges_to_points(path_graph(3))
    assert centroid([0, 1], inst.dataset).tolist() == [0.5, 1.0, 0.5]
    # vertex 3 is redundant after 1 and 2 on the path 1-2-3: its group is empty
    with pytest.raises(GraphError):
        predicted_kmeans_cost(path_graph(3), [1, 2, 3])


def test_median_cost_examples():
    star = star_graph(3)
    assert graph_cluster_median_cost(star, star.edges) == 3
    p4 = path_graph(4)
    assert graph_cluster_median_cost(p4, p4.edges) == 4
    assert graph_cluster_median_cost(p4, [(1, 2)]) == 0


def test_is_star_examples():
    assert is_star(star_graph(3), star_graph(3).edges)
    assert not is_star(path_graph(4), path_graph(4).edges)
    assert is_star(path_graph(2), [(1, 2)])


def test_generators():
    p = generate_graph("path", n=4)
    assert (p.n, p.m, p.max_degree()) == (4, 3, 2) and p.is_triangle_free()
    c = generate_graph("cycle", n=4)
    assert c.is_triangle_free() and set(c.degrees()) == {2}
    g = generate_graph("random-3-bounded-triangle-free", seed=7, n=12, m=14)
    assert g.m == 14 and g.is_triangle_free() and g.max_degree() <= 3
    assert generate_graph("random-3-bounded-triangle-free", seed=7, n=12, m=14) == g
    assert generate_graph("grid", rows=3, cols=3).max_degree() == 4
    b = generate_graph("random-B-bounded-triangle-free", seed=2, n=10, m=15, max_degree=4)
    assert b.is_triangle_free() and b.max_degree() <= 4


@pytest.mark.parametrize(
    "family, params",
    [
        ("cycle", {"n": 3}),
        ("star", {"arms": 4, "max_degree": 3}),
        ("random-3-bounded-triangle-free", {"n": 4, "m": 10}),
        ("hypercube", {"n": 3}),
    ],
)
def test_generator_infeasible(family, params):
    with pytest.raises(GraphError):
        generate_graph(family, **params)


def _connected(edges):
    verts = {v for e in edges for v in e}
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return seen == verts


def _connected_subsets(g, max_p):
    for p in range(1, max_p + 1):
        for sub in itertools.combinations(g.edges, p):
            if _connected(sub):
                yield sub


SMALL_GRAPHS = [
    path_graph(6), cycle_graph(6), cycle_graph(8), star_graph(3), grid_graph(2, 4),
    generate_graph("random-3-bounded-triangle-free", seed=11, n=8, m=10),
    Graph(7, ((1, 2), (1, 3), (1, 4), (2, 5), (3, 6), (4, 7), (5, 6))),
]


@pytest.mark.parametrize("g", SMALL_GRAPHS, ids=lambda g: f"n{g.n}m{g.m}")
def test_median_formula_matches_embedding(g):
    inst = edges_to_points(g)
    for sub in _connected_subsets(g, 5):
        members = Dataset(inst.dataset.points[[inst.edge_index[e] for e in sub]])
        measured = cost(Partition((tuple(range(len(sub))),), len(sub)), members, KMEDIANS)
        formula = graph_cluster_median_cost(g, sub)
        assert measured == formula
        if g.is_triangle_free() and g.max_degree() <= 3:
            p = len(sub)
            if is_star(g, sub):
                assert formula == (p if p >= 2 else 0)
            else:
                assert formula >= math.ceil(4 * p / 3)


def _tf_graphs():
    out = [path_graph(n) for n in range(2, 10)] + [cycle_graph(n) for n in range(4, 11)]
    out += [star_graph(a) for a in (1, 2, 3, 5)] + [grid_graph(2, 3), grid_graph(3, 3)]
    out += [generate_graph("random-3-bounded-triangle-free", seed=s, n=10, m=12) for s in range(6)]
    return out


@pytest.mark.parametrize("g", _tf_graphs(), ids=lambda g: f"n{g.n}m{g.m}")
def test_cover_clustering_identities(g):
    cover = list(min_vertex_cover(g))
    inst = edges_to_points(g)
    tree = cover_to_tree(inst, cover)
    part = induced_partition(tree, inst.dataset)
    groups = cover_clustering(g, cover)
    assert [list(c) for c in part.clusters] == groups
    assert all(groups)
    # every group is a star centred on its cover vertex
    for j, grp in enumerate(groups):
        assert all(cover[j] in g.edges[i] for i in grp)
    assert cost(part, inst.dataset, KMEANS) == pytest.approx(predicted_kmeans_cost(g, cover), abs=1e-9)
    kmed = cost(part, inst.dataset, KMEDIANS)
    assert kmed <= g.m
    expected = sum(len(grp) for grp in groups if len(grp) >= 2)
    assert kmed == expected
    if all(len(grp) >= 2 for grp in groups):
        assert kmed == g.m


@pytest.mark.parametrize("g", [x for x in _tf_graphs() if x.max_degree() <= 3], ids=lambda g: f"n{g.n}m{g.m}")
def test_kcenters_centroid_radius_bound(g):
    cover = list(min_vertex_cover(g))
    inst = edges_to_points(g)
    part = induced_partition(cover_to_tree(inst, cover), inst.dataset)
    reps = [centroid(c, inst.dataset) for c in part.clusters]
    radius = cost(part.with_representatives(reps), inst.dataset, KCENTERS)
    assert radius <= math.sqrt(2 / 3) + 1e-9
    # the optimal (enclosing ball) representatives can only do better
    assert cost(part, inst.dataset, KCENTERS) <= radius + 1e-12
