"""Greedy construction of a maximum-spacing threshold tree.

Each iteration scans every (leaf, axis cut) pair of the current frontier
and applies the one whose resulting partition has the largest spacing. The
partition after iteration ``i`` has the best spacing achievable by any
threshold tree with ``i + 1`` leaves.

Splitting a leaf only separates pairs that shared that leaf, so the
spacing after a split is ``min(current spacing, cross distance of the
split)``; the spacing of a single-leaf tree is taken to be ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .data import Dataset, Metric, pairwise
from .tree import AxisCut, Leaf, Split, ThresholdTree


@dataclass
class LeafState:
    """A frontier leaf: its points and their order along every dimension."""

    leaf_id: int
    indices: np.ndarray
    orders: list[np.ndarray]  # orders[dim] = indices sorted by that coordinate

    @classmethod
    def root(cls, ds: Dataset) -> "LeafState":
        idx = np.arange(ds.n)
        return cls(0, idx, [np.argsort(ds.points[:, j], kind="stable") for j in range(ds.d)])

    def __len__(self):
        return self.indices.shape[0]

    def split(self, cut: AxisCut, ds: Dataset, left_id: int, right_id: int):
        goes_left = ds.points[:, cut.dim] <= cut.theta
        out = []
        for side, lid in ((goes_left, left_id), (~goes_left, right_id)):
            orders = [o[side[o]] for o in self.orders]
            out.append(LeafState(lid, np.sort(self.indices[side[self.indices]]), orders))
        return tuple(out)


def _threshold(a: float, b: float) -> float:
    theta = (a + b) / 2
    # adjacent floats can round the midpoint up onto b
    if not a <= theta < b:
        theta = a
    return theta


def _cut_positions(leaf: LeafState, ds: Dataset, dim: int):
    """Positions ``j`` in the sorted order where a cut separates ``j+1`` points from the rest."""
    vals = ds.points[leaf.orders[dim], dim]
    return np.flatnonzero(vals[:-1] < vals[1:]), vals


def candidate_cuts(leaf: LeafState, ds: Dataset) -> list[tuple[AxisCut, tuple[int, ...], tuple[int, ...]]]:
    """All midpoint cuts that split ``leaf`` into two non-empty sides.

    Ordered by dimension, then threshold; at most ``(len(leaf) - 1) * d`` of them.
    """
    out = []
    for dim in range(ds.d):
        positions, vals = _cut_positions(leaf, ds, dim)
        order = leaf.orders[dim]
        for j in positions:
            cut = AxisCut(dim, _threshold(vals[j], vals[j + 1]))
            out.append((cut, tuple(sorted(order[: j + 1].tolist())), tuple(sorted(order[j + 1:].tolist()))))
    return out


def split_spacing(current_spacing: float, left, right, ds: Dataset, metric: "str | Metric" = Metric.L2) -> float:
    """Spacing of the frontier after separating ``left`` from ``right``."""
    left, right = list(left), list(right)
    if not left or not right:
        raise ValueError("both sides of a split must be non-empty")
    if set(left) & set(right):
        raise ValueError("split sides overlap")
    cross = float(pairwise(ds.points[left], ds.points[right], metric).min())
    return min(current_spacing, cross)


@dataclass
class _Candidates:
    dims: np.ndarray
    thetas: np.ndarray
    cross: np.ndarray  # min distance between the two sides of each cut


def _scan_leaf(leaf: LeafState, ds: Dataset, metric: Metric) -> _Candidates:
    dims, thetas, cross = [], [], []
    if len(leaf) >= 2:
        D = pairwise(ds.points[leaf.indices], ds.points[leaf.indices], metric)
        local = {int(g): i for i, g in enumerate(leaf.indices)}
        for dim in range(ds.d):
            positions, vals = _cut_positions(leaf, ds, dim)
            if positions.size == 0:
                continue
            o = np.array([local[int(g)] for g in leaf.orders[dim]])
            Dd = D[np.ix_(o, o)]
            # prefix-min over rows, then suffix-min over columns:
            # S[j, q] = min_{p <= j, r >= q} D[p, r]
            S = np.minimum.accumulate(np.minimum.accumulate(Dd, axis=0)[:, ::-1], axis=1)[:, ::-1]
            for j in positions:
                dims.append(dim)
                thetas.append(_threshold(vals[j], vals[j + 1]))
                cross.append(S[j, j + 1])
    return _Candidates(np.array(dims, dtype=np.int64), np.array(thetas, dtype=np.float64),
                       np.array(cross, dtype=np.float64))


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    leaf_id: int
    cut: AxisCut
    spacing: float
    n_candidates: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    frontier: tuple[tuple[int, ...], ...]


@dataclass
class GreedyTrace:
    steps: list[TraceStep] = field(default_factory=list)

    @property
    def spacings(self) -> list[float]:
        return [s.spacing for s in self.steps]

    @property
    def final_frontier(self) -> Optional[tuple[tuple[int, ...], ...]]:
        return self.steps[-1].frontier if self.steps else None

    def to_dict(self) -> list[dict]:
        return [
            {
                "iteration": s.iteration,
                "leaf": s.leaf_id,
                "cut": {"dim": s.cut.dim, "theta": s.cut.theta},
                "spacing": s.spacing,
                "candidates": s.n_candidates,
                "sizes": [len(s.left), len(s.right)],
            }
            for s in self.steps
        ]


def fit(ds: Dataset, k: int, metric: "str | Metric" = Metric.L2) -> tuple[ThresholdTree, GreedyTrace]:
    """Grow a threshold tree with ``k`` non-empty leaves maximising spacing greedily.

    Ties between equally good splits go to the lowest leaf id, then the
    lowest dimension, then the lowest threshold. Leaf ids are assigned in
    creation order; the returned tree is relabelled left to right.
    """
    metric = Metric.parse(metric)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError(f"k must be an int, got {k!r}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    distinct = ds.n_distinct()
    if k > distinct:
        raise ValueError(f"k={k} exceeds the number of distinct points ({distinct})")

    root = LeafState.root(ds)
    frontier: dict[int, LeafState] = {0: root}
    scans: dict[int, _Candidates] = {0: _scan_leaf(root, ds, metric)}
    children: dict[int, tuple[AxisCut, int, int]] = {}
    next_id = 1
    current = math.inf
    trace = GreedyTrace()

    for it in range(1, k):
        best = None  # (value, leaf_id, position)
        n_cand = 0
        for lid in sorted(frontier):
            cands = scans[lid]
            if cands.cross.size == 0:
                continue
            n_cand += cands.cross.size
            capped = np.minimum(cands.cross, current)
            pos = int(np.argmax(capped))  # first max: lowest (dim, theta)
            if best is None or capped[pos] > best[0]:
                best = (float(capped[pos]), lid, pos)
        assert best is not None, "no splittable leaf although k <= distinct points"
        value, lid, pos = best
        cands = scans.pop(lid)
        cut = AxisCut(int(cands.dims[pos]), float(cands.thetas[pos]))
        leaf = frontier.pop(lid)
        left, right = leaf.split(cut, ds, next_id, next_id + 1)
        children[lid] = (cut, next_id, next_id + 1)
        for child in (left, right):
            frontier[child.leaf_id] = child
            scans[child.leaf_id] = _scan_leaf(child, ds, metric)
        next_id += 2
        current = value
        trace.steps.append(TraceStep(
            iteration=it,
            leaf_id=lid,
            cut=cut,
            spacing=value,
            n_candidates=n_cand,
            left=tuple(left.indices.tolist()),
            right=tuple(right.indices.tolist()),
            frontier=tuple(tuple(frontier[i].indices.tolist()) for i in sorted(frontier)),
        ))

    def build(lid):
        if lid not in children:
            return Leaf(lid)
        cut, a, b = children[lid]
        return Split(cut, build(a), build(b))

    # creation ids are not contiguous; wrap leaves with temporary 0..k-1 ids before relabelling
    order = iter(range(k))

    def squash(node):
        if isinstance(node, Leaf):
            return Leaf(next(order))
        return Split(node.cut, squash(node.left), squash(node.right))

    tree = ThresholdTree(squash(build(0)))
    return tree, trace
