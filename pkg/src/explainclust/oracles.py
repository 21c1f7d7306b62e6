"""Exact solvers for small instances.

* ``optimal_explainable``: best threshold tree with exactly ``k`` non-empty
  leaves for any objective, by exhaustive search over midpoint cuts with
  memoisation on point subsets.
* ``unrestricted_max_spacing``: single-link value via a minimum spanning tree.
* ``unrestricted_optimal``: best partition over all set partitions.
* ``min_vertex_cover``: branch and bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .data import Dataset, Metric, pairwise
from .errors import LimitExceeded
from .objectives import Kind, Objective, cluster_cost, cost, optimal_representatives
from .reductions import Graph, is_vertex_cover
from .tree import AxisCut, Leaf, Partition, Split, ThresholdTree, induced_partition


@dataclass(frozen=True)
class OracleLimits:
    max_n: int = 12
    max_k: int = 4
    max_d: int = 3


@dataclass
class OracleResult:
    """Optimum found by an exact search.

    ``n_examined`` counts (subset, cut, leaf-budget split) combinations the
    search evaluated; with memoisation each one stands for every tree that
    shares that sub-structure.
    """

    cost: float
    tree: Optional[ThresholdTree] = None
    partition: Optional[Partition] = None
    n_examined: int = 0


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class _TreeSearch:
    def __init__(self, ds: Dataset, obj: Objective):
        self.ds = ds
        self.obj = obj
        self.kind = obj.kind
        self.memo: dict[tuple[int, int], tuple[Optional[float], Optional[tuple]]] = {}
        self._cuts: dict[int, list] = {}
        self._leaf: dict[int, float] = {}
        self._cross: dict[tuple[int, int], float] = {}
        self.D = pairwise(ds.points, ds.points, obj.metric) if obj.kind is Kind.SPACING else None
        self.examined = 0

    def cuts(self, mask: int):
        if mask in self._cuts:
            return self._cuts[mask]
        idx = np.array(_bits(mask))
        pts = self.ds.points[idx]
        out = []
        for dim in range(self.ds.d):
            vals = np.unique(pts[:, dim])
            for a, b in zip(vals[:-1], vals[1:]):
                theta = (a + b) / 2
                if not a <= theta < b:
                    theta = a
                lmask = 0
                for i, v in zip(idx, pts[:, dim]):
                    if v <= theta:
                        lmask |= 1 << int(i)
                out.append((dim, float(theta), lmask, mask & ~lmask))
        self._cuts[mask] = out
        return out

    def leaf_value(self, mask: int) -> float:
        if self.kind is Kind.SPACING:
            return math.inf
        if mask not in self._leaf:
            members = self.ds.points[_bits(mask)]
            part = Partition((tuple(range(members.shape[0])),), members.shape[0])
            rep = optimal_representatives(part, Dataset(members), self.obj)[0]
            self._leaf[mask] = cluster_cost(members, rep, self.kind)
        return self._leaf[mask]

    def cross(self, lmask: int, rmask: int) -> float:
        key = (lmask, rmask)
        if key not in self._cross:
            self._cross[key] = float(self.D[np.ix_(_bits(lmask), _bits(rmask))].min())
        return self._cross[key]

    def combine(self, lmask, rmask, lv, rv) -> float:
        if self.kind is Kind.SPACING:
            return min(self.cross(lmask, rmask), lv, rv)
        if self.kind is Kind.KCENTERS:
            return max(lv, rv)
        return lv + rv

    def better(self, a: float, b: Optional[float]) -> bool:
        if b is None:
            return True
        return a > b if self.obj.maximize else a < b

    def best(self, mask: int, j: int) -> Optional[float]:
        """Optimal value over trees with exactly ``j`` non-empty leaves on ``mask``; None if impossible."""
        key = (mask, j)
        if key in self.memo:
            return self.memo[key][0]
        if j == 1:
            self.memo[key] = (self.leaf_value(mask), None)
            return self.memo[key][0]
        best_v, best_choice = None, None
        for dim, theta, lmask, rmask in self.cuts(mask):
            for a in range(1, j):
                self.examined += 1
                lv = self.best(lmask, a)
                if lv is None:
                    continue
                rv = self.best(rmask, j - a)
                if rv is None:
                    continue
                v = self.combine(lmask, rmask, lv, rv)
                if self.better(v, best_v):
                    best_v, best_choice = v, (dim, theta, lmask, rmask, a)
        self.memo[key] = (best_v, best_choice)
        return best_v

    def tree(self, mask: int, j: int):
        _, choice = self.memo[(mask, j)]
        if choice is None:
            return Leaf(0)
        dim, theta, lmask, rmask, a = choice
        return Split(AxisCut(dim, theta), self.tree(lmask, a), self.tree(rmask, j - a))


def _check_limits(ds: Dataset, k: int, limits: Optional[OracleLimits]):
    limits = limits or OracleLimits()
    if ds.n > limits.max_n:
        raise LimitExceeded(f"n={ds.n} exceeds oracle limit {limits.max_n}")
    if ds.d > limits.max_d:
        raise LimitExceeded(f"d={ds.d} exceeds oracle limit {limits.max_d}")
    if k > limits.max_k:
        raise LimitExceeded(f"k={k} exceeds oracle limit {limits.max_k}")


def _relabel(node):
    counter = iter(range(10**9))

    def rec(n):
        if isinstance(n, Leaf):
            return Leaf(next(counter))
        left = rec(n.left)
        return Split(n.cut, left, rec(n.right))

    return ThresholdTree(rec(node))


def optimal_explainable_profile(
    ds: Dataset, k: int, obj: Objective, limits: Optional[OracleLimits] = None
) -> dict[int, OracleResult]:
    """Optimal explainable results for every leaf count ``j`` up to ``k``.

    Spacing needs ``j >= 2``; the center-based objectives also report ``j = 1``.
    """
    if k < 1 or (obj.kind is Kind.SPACING and k < 2):
        raise ValueError(f"k={k} too small for {obj.kind.value}")
    _check_limits(ds, k, limits)
    distinct = ds.n_distinct()
    if k > distinct:
        raise ValueError(f"k={k} exceeds the number of distinct points ({distinct})")
    search = _TreeSearch(ds, obj)
    full = (1 << ds.n) - 1
    out = {}
    for j in range(1 if obj.center_based else 2, k + 1):
        value = search.best(full, j)
        assert value is not None
        tree = _relabel(search.tree(full, j))
        part = induced_partition(tree, ds)
        out[j] = OracleResult(cost(part, ds, obj), tree, part, search.examined)
    return out


def optimal_explainable(
    ds: Dataset, k: int, obj: Objective, limits: Optional[OracleLimits] = None
) -> OracleResult:
    """Best threshold tree with exactly ``k`` non-empty leaves.

    Minimises k-means/k-medians/k-centers, maximises spacing. The reported
    cost is recomputed from the returned tree's partition.
    """
    return optimal_explainable_profile(ds, k, obj, limits)[k]


def minimum_spanning_tree(ds: Dataset, metric: "str | Metric" = Metric.L2) -> list[tuple[int, int, float]]:
    """Prim's algorithm on the complete graph; edges as ``(i, j, weight)``."""
    D = pairwise(ds.points, ds.points, metric)
    n = ds.n
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = D[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        edges.append((int(parent[v]), v, float(best[v])))
        in_tree[v] = True
        closer = D[v] < best
        best = np.where(closer, D[v], best)
        parent = np.where(closer, v, parent)
    return edges


def unrestricted_max_spacing(ds: Dataset, k: int, metric: "str | Metric" = Metric.L2) -> float:
    """Largest spacing of any ``k``-partition: the ``(k-1)``-th heaviest MST edge."""
    if not 2 <= k <= ds.n:
        raise ValueError(f"need 2 <= k <= n={ds.n}, got k={k}")
    weights = sorted((w for _, _, w in minimum_spanning_tree(ds, metric)), reverse=True)
    return weights[k - 2]


def single_link_partition(ds: Dataset, k: int, metric: "str | Metric" = Metric.L2) -> Partition:
    """Components left after deleting the ``k - 1`` heaviest MST edges."""
    if not 2 <= k <= ds.n:
        raise ValueError(f"need 2 <= k <= n={ds.n}, got k={k}")
    edges = sorted(minimum_spanning_tree(ds, metric), key=lambda e: e[2])[: ds.n - k]
    parent = list(range(ds.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        parent[find(i)] = find(j)
    roots = {}
    labels = [roots.setdefault(find(i), len(roots)) for i in range(ds.n)]
    return Partition.from_labels(labels)


def set_partitions(n: int, k: int) -> Iterator[list[int]]:
    """Label vectors (restricted growth strings) of all partitions of ``n`` items into exactly ``k`` blocks."""
    labels = [0] * n

    def rec(i, used):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield list(labels)
            return
        for lab in range(min(used + 1, k)):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    if 1 <= k <= n:
        yield from rec(0, 0)


def unrestricted_optimal(ds: Dataset, k: int, obj: Objective, max_n: int = 10) -> OracleResult:
    """Optimal ``k``-partition with no explainability constraint, by enumeration."""
    if ds.n > max_n:
        raise LimitExceeded(f"n={ds.n} exceeds enumeration limit {max_n}")
    if not 1 <= k <= ds.n or (obj.kind is Kind.SPACING and k < 2):
        raise ValueError(f"k={k} out of range for n={ds.n}")
    best: Optional[OracleResult] = None
    count = 0
    for labels in set_partitions(ds.n, k):
        count += 1
        part = Partition.from_labels(labels, k)
        value = cost(part, ds, obj)
        if best is None or (value > best.cost if obj.maximize else value < best.cost):
            best = OracleResult(value, None, part)
    assert best is not None
    best.n_examined = count
    return best


def _matching_bound(edges: list[tuple[int, int]]) -> int:
    used: set[int] = set()
    size = 0
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            size += 1
    return size


def _make_minimal(g: Graph, cover: set[int]) -> set[int]:
    for v in sorted(cover, reverse=True):
        if is_vertex_cover(g, cover - {v}):
            cover = cover - {v}
    return cover


def min_vertex_cover(g: Graph, max_vertices: int = 30) -> tuple[int, ...]:
    """Minimum vertex cover by branch and bound on uncovered edges.

    For an uncovered edge ``(u, v)`` the search either takes ``u``, or
    rejects ``u`` and therefore takes ``v`` and every other neighbour of
    ``u``. A greedy maximal matching of the uncovered edges bounds the rest.
    """
    if g.n > max_vertices:
        raise LimitExceeded(f"|V|={g.n} exceeds vertex-cover limit {max_vertices}")
    adj = g.neighbours()

    # greedy incumbent: repeatedly take a max-degree vertex
    remaining = list(g.edges)
    incumbent: set[int] = set()
    while remaining:
        deg: dict[int, int] = {}
        for u, v in remaining:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        top = min(deg, key=lambda x: (-deg[x], x))
        incumbent.add(top)
        remaining = [e for e in remaining if top not in e]
    best = [_make_minimal(g, incumbent)]

    def rec(chosen: frozenset, banned: frozenset):
        uncovered = [e for e in g.edges if e[0] not in chosen and e[1] not in chosen]
        if not uncovered:
            if len(chosen) < len(best[0]):
                best[0] = set(chosen)
            return
        if len(chosen) + _matching_bound(uncovered) >= len(best[0]):
            return
        u, v = uncovered[0]
        if u not in banned:
            rec(chosen | {u}, banned)
        forced = adj[u] - chosen
        if u not in chosen and not (forced & banned):
            rec(chosen | forced, banned | {u})

    rec(frozenset(), frozenset())
    return tuple(sorted(_make_minimal(g, best[0])))
