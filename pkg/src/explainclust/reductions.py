"""Vertex-cover reductions to explainable clustering.

A graph on vertices ``1..n`` becomes a point set in ``{0,1}^n``: one point
per edge, with ones exactly at the edge's two endpoints. Vertex ``i`` maps
to coordinate ``i - 1``. A vertex cover ``i_1 < ... < i_k`` induces the
clustering whose group ``j`` holds the edges touching ``i_j`` but no
earlier cover vertex; a chain of cuts ``(i_j - 1, 1/2)`` realises it.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .data import Dataset
from .errors import GraphError
from .tree import AxisCut, Leaf, Split, ThresholdTree

Edge = tuple[int, int]


def _norm(e) -> Edge:
    u, v = int(e[0]), int(e[1])
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``; edge order is preserved."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"need at least one vertex, got n={self.n}")
        edges = tuple(_norm(e) for e in self.edges)
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {(u, v)} outside vertices 1..{self.n}")
        if len(set(edges)) != len(edges):
            raise GraphError("duplicate edges")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbours(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        """Degree of vertex ``i`` at position ``i - 1``."""
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u - 1] += 1
            deg[v - 1] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees())

    def is_triangle_free(self) -> bool:
        adj = self.neighbours()
        return all(not (adj[u] & adj[v]) for u, v in self.edges)

    def is_bounded(self, b: int) -> bool:
        return self.max_degree() <= b


def parse_graph(text: str) -> Graph:
    """Read ``"n m"`` followed by ``m`` lines ``"u v"`` (1-based ids)."""
    tokens = text.split()
    if len(tokens) < 2:
        raise GraphError("graph text must start with 'n m'")
    try:
        nums = [int(t) for t in tokens]
    except ValueError:
        raise GraphError("graph text must contain integers only") from None
    n, m = nums[0], nums[1]
    body = nums[2:]
    if len(body) != 2 * m:
        raise GraphError(f"header announces {m} edges, found {len(body) / 2:g}")
    return Graph(n, tuple(zip(body[0::2], body[1::2])))


def format_graph(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def load_graph(path: "str | os.PathLike") -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def save_graph(g: Graph, path: "str | os.PathLike") -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


@dataclass(frozen=True, eq=False)
class ReductionInstance:
    graph: Graph
    dataset: Dataset
    edge_index: dict[Edge, int]


def edges_to_points(g: Graph) -> ReductionInstance:
    if g.m == 0:
        raise GraphError("graph has no edges")
    pts = np.zeros((g.m, g.n))
    for row, (u, v) in enumerate(g.edges):
        pts[row, u - 1] = pts[row, v - 1] = 1.0
    names = tuple(f"v{i}" for i in range(1, g.n + 1))
    return ReductionInstance(g, Dataset(pts, names), {e: i for i, e in enumerate(g.edges)})


def is_vertex_cover(g: Graph, cover: Iterable[int]) -> bool:
    s = set(cover)
    return all(u in s or v in s for u, v in g.edges)


def _check_cover(g: Graph, cover: Sequence[int]) -> list[int]:
    cover = [int(c) for c in cover]
    if not cover:
        raise GraphError("cover is empty")
    if any(a >= b for a, b in zip(cover, cover[1:])):
        raise GraphError(f"cover must be strictly increasing, got {cover}")
    if not all(1 <= c <= g.n for c in cover):
        raise GraphError(f"cover vertices must lie in 1..{g.n}")
    missed = [e for e in g.edges if e[0] not in cover and e[1] not in cover]
    if missed:
        raise GraphError(f"not a vertex cover: edge {missed[0]} is uncovered")
    return cover


def cover_clustering(g: Graph, cover: Sequence[int]) -> list[list[int]]:
    """Edge (point) indices of each group, built from the set definition.

    Group ``j`` holds the edges incident to ``cover[j]`` and to no earlier
    cover vertex. Groups may be empty when the cover is redundant.
    """
    cover = _check_cover(g, cover)
    groups: list[list[int]] = [[] for _ in cover]
    for idx, (u, v) in enumerate(g.edges):
        for j, c in enumerate(cover):
            if c in (u, v):
                groups[j].append(idx)
                break
    return groups


def cover_to_tree(inst: ReductionInstance, cover: Sequence[int]) -> ThresholdTree:
    """Chain tree whose level-``j`` cut is ``(cover[j] - 1, 0.5)``.

    The right child at level ``j`` is the leaf of group ``j`` (cluster id
    ``j``); the deepest left child holds the last group.
    """
    cover = _check_cover(inst.graph, cover)
    node = Leaf(len(cover) - 1)
    for j in range(len(cover) - 2, -1, -1):
        node = Split(AxisCut(cover[j] - 1, 0.5), node, Leaf(j))
    return ThresholdTree(node)


def predicted_kmeans_cost(g: Graph, cover: Sequence[int]) -> float:
    """Closed-form k-means cost ``|E| - k`` of the cover-induced clustering.

    Each group is a star around its cover vertex; with the centroid as
    representative every member sits at squared distance ``1 - 1/|E_j|``,
    so a group contributes ``|E_j| - 1``. Valid only when no group is empty.
    """
    groups = cover_clustering(g, cover)
    empty = [cover[j] for j, grp in enumerate(groups) if not grp]
    if empty:
        raise GraphError(
            f"cover is not minimal: vertices {empty} get empty groups, the |E| - k formula does not apply"
        )
    return float(g.m - len(groups))


def degree_in(cluster: Iterable[Edge], n: int) -> list[int]:
    deg = [0] * n
    for u, v in cluster:
        deg[u - 1] += 1
        deg[v - 1] += 1
    return deg


def graph_cluster_median_cost(g: Graph, cluster: Iterable[Edge]) -> int:
    """k-medians cost of an edge cluster computed on the graph side.

    ``sum_i min(p - d_C(i), d_C(i))`` where ``d_C(i)`` counts cluster edges at ``i``.
    """
    cluster = [_norm(e) for e in cluster]
    if not cluster:
        raise GraphError("cluster is empty")
    p = len(cluster)
    return sum(min(p - d, d) for d in degree_in(cluster, g.n))


def is_star(g: Graph, cluster: Iterable[Edge]) -> bool:
    cluster = [_norm(e) for e in cluster]
    if not cluster:
        raise GraphError("cluster is empty")
    common = set(cluster[0])
    for e in cluster[1:]:
        common &= set(e)
    return bool(common)


FAMILIES = ("path", "cycle", "star", "grid", "random-3-bounded-triangle-free", "random-B-bounded-triangle-free")


def path_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs at least 2 vertices")
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 4:
        raise GraphError("cycle needs at least 4 vertices to be triangle-free")
    return Graph(n, tuple((i, i + 1) for i in range(1, n)) + ((1, n),))


def star_graph(arms: int, max_degree: Optional[int] = None) -> Graph:
    if arms < 1:
        raise GraphError("star needs at least one arm")
    if max_degree is not None and arms > max_degree:
        raise GraphError(f"star with {arms} arms exceeds degree bound {max_degree}")
    return Graph(arms + 1, tuple((1, i) for i in range(2, arms + 2)))


def grid_graph(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise GraphError("grid needs at least 2 vertices")
    vid = lambda r, c: r * cols + c + 1  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, tuple(edges))


def random_triangle_free(n: int, m: int, max_degree: int, seed: int) -> Graph:
    """Insert shuffled vertex pairs, rejecting any that close a triangle or break the degree bound."""
    if n < 2 or m < 1 or max_degree < 1:
        raise GraphError("need n >= 2, m >= 1, max_degree >= 1")
    rng = random.Random(seed)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    edges = []
    for u, v in pairs:
        if len(edges) == m:
            break
        if len(adj[u]) >= max_degree or len(adj[v]) >= max_degree or adj[u] & adj[v]:
            continue
        adj[u].add(v)
        adj[v].add(u)
        edges.append((u, v))
    if len(edges) < m:
        raise GraphError(
            f"could only place {len(edges)} of {m} edges on {n} vertices "
            f"(triangle-free, max degree {max_degree}, seed {seed})"
        )
    return Graph(n, tuple(edges))


def generate_graph(family: str, seed: int = 0, **params) -> Graph:
    """Build a graph of a named family and verify its advertised properties.

    Parameters by family: ``path``/``cycle``: ``n``; ``star``: ``arms`` and
    optional ``max_degree``; ``grid``: ``rows``, ``cols``;
    ``random-3-bounded-triangle-free``: ``n``, ``m``;
    ``random-B-bounded-triangle-free``: ``n``, ``m``, ``max_degree``.
    """
    if family == "path":
        g, bound = path_graph(params["n"]), 2
    elif family == "cycle":
        g, bound = cycle_graph(params["n"]), 2
    elif family == "star":
        g = star_graph(params["arms"], params.get("max_degree"))
        bound = params.get("max_degree") or params["arms"]
    elif family == "grid":
        g, bound = grid_graph(params["rows"], params["cols"]), 4
    elif family == "random-3-bounded-triangle-free":
        bound = 3
        g = random_triangle_free(params["n"], params["m"], bound, seed)
    elif family == "random-B-bounded-triangle-free":
        bound = params["max_degree"]
        g = random_triangle_free(params["n"], params["m"], bound, seed)
    else:
        raise GraphError(f"unknown graph family {family!r}; choose from {FAMILIES}")
    if not g.is_triangle_free():
        raise GraphError(f"{family} output contains a triangle")
    if not g.is_bounded(bound):
        raise GraphError(f"{family} output exceeds degree bound {bound}")
    return g
