"""Axis-aligned threshold trees and the partitions they induce.

A point goes to the left child of a cut ``(dim, theta)`` iff
``x[dim] <= theta``; ties go left.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .data import Dataset
from .errors import TreeError


@dataclass(frozen=True)
class AxisCut:
    dim: int
    theta: float

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)) or self.dim < 0:
            raise TreeError(f"cut dimension must be a non-negative int, got {self.dim!r}")
        if not math.isfinite(self.theta):
            raise TreeError(f"cut threshold must be finite, got {self.theta!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "theta", float(self.theta))

    def goes_left(self, x) -> bool:
        return bool(x[self.dim] <= self.theta)


@dataclass(frozen=True)
class Leaf:
    cluster: int


@dataclass(frozen=True)
class Split:
    cut: AxisCut
    left: "Node"
    right: "Node"


Node = Union[Leaf, Split]


def _walk(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Split):
            stack.append(cur.right)
            stack.append(cur.left)


class ThresholdTree:
    """Binary tree of axis cuts whose ``k`` leaves carry cluster ids ``0..k-1``."""

    __slots__ = ("root", "k", "max_dim")

    def __init__(self, root: Node):
        ids = []
        n_internal = 0
        max_dim = -1
        for node in _walk(root):
            if isinstance(node, Leaf):
                ids.append(node.cluster)
            elif isinstance(node, Split):
                n_internal += 1
                max_dim = max(max_dim, node.cut.dim)
            else:
                raise TreeError(f"not a tree node: {node!r}")
        if sorted(ids) != list(range(len(ids))):
            raise TreeError(f"leaf ids must be 0..k-1 each exactly once, got {sorted(ids)}")
        assert len(ids) == n_internal + 1
        self.root = root
        self.k = len(ids)
        self.max_dim = max_dim

    @classmethod
    def leaf(cls) -> "ThresholdTree":
        return cls(Leaf(0))

    def __eq__(self, other):
        return isinstance(other, ThresholdTree) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def __repr__(self):
        return f"ThresholdTree({serialize(self)})"

    @property
    def n_internal(self) -> int:
        return self.k - 1

    def cuts(self) -> list[AxisCut]:
        return [n.cut for n in _walk(self.root) if isinstance(n, Split)]

    def leaves(self) -> list[Leaf]:
        """Leaves in left-to-right (depth-first) order."""
        return [n for n in _walk(self.root) if isinstance(n, Leaf)]

    def check_dimension(self, d: int) -> None:
        if self.max_dim >= d:
            raise TreeError(f"tree cuts dimension {self.max_dim} but data has d={d}")

    def relabel(self) -> "ThresholdTree":
        """Copy with cluster ids reassigned in left-to-right leaf order."""
        counter = iter(range(self.k))

        def rec(node):
            if isinstance(node, Leaf):
                return Leaf(next(counter))
            left = rec(node.left)
            return Split(node.cut, left, rec(node.right))

        return ThresholdTree(rec(self.root))


@dataclass(frozen=True)
class Partition:
    """Disjoint cluster index sets covering ``0..n-1``.

    Clusters are stored as sorted index tuples. ``representatives``, when
    given, holds one point per cluster.
    """

    clusters: tuple[tuple[int, ...], ...]
    n: int
    representatives: Optional[tuple[tuple[float, ...], ...]] = None

    def __post_init__(self):
        clusters = tuple(tuple(sorted(int(i) for i in c)) for c in self.clusters)
        seen = [i for c in clusters for i in c]
        if len(seen) != len(set(seen)):
            raise ValueError("clusters are not disjoint")
        if sorted(seen) != list(range(self.n)):
            raise ValueError(f"clusters do not cover 0..{self.n - 1}")
        object.__setattr__(self, "clusters", clusters)
        if self.representatives is not None:
            reps = tuple(tuple(float(v) for v in r) for r in self.representatives)
            if len(reps) != len(clusters):
                raise ValueError("need exactly one representative per cluster")
            if len({len(r) for r in reps}) > 1:
                raise ValueError("representatives have inconsistent dimensions")
            object.__setattr__(self, "representatives", reps)

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: Optional[int] = None) -> "Partition":
        labels = [int(v) for v in labels]
        k = (max(labels) + 1) if k is None else k
        groups: list[list[int]] = [[] for _ in range(k)]
        for i, lab in enumerate(labels):
            groups[lab].append(i)
        return cls(tuple(tuple(g) for g in groups), len(labels))

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def empty_clusters(self) -> list[int]:
        return [i for i, c in enumerate(self.clusters) if not c]

    @property
    def n_nonempty(self) -> int:
        return sum(1 for c in self.clusters if c)

    def labels(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for i, c in enumerate(self.clusters):
            out[list(c)] = i
        return out

    def as_sets(self) -> frozenset[frozenset[int]]:
        """Order-free view, for comparing partitions up to relabelling."""
        return frozenset(frozenset(c) for c in self.clusters if c)

    def with_representatives(self, reps) -> "Partition":
        return Partition(self.clusters, self.n, tuple(tuple(r) for r in reps))


def route(tree: ThresholdTree, x) -> int:
    x = np.asarray(x, dtype=np.float64)
    if tree.max_dim >= x.shape[0]:
        raise TreeError(f"point has {x.shape[0]} coordinates, tree needs {tree.max_dim + 1}")
    node = tree.root
    while isinstance(node, Split):
        node = node.left if x[node.cut.dim] <= node.cut.theta else node.right
    return node.cluster


def assign(tree: ThresholdTree, points: np.ndarray) -> np.ndarray:
    """Vectorised ``route`` over the rows of ``points``."""
    points = np.asarray(points, dtype=np.float64)
    if tree.max_dim >= points.shape[1]:
        raise TreeError(f"data has d={points.shape[1]}, tree needs {tree.max_dim + 1}")
    labels = np.empty(points.shape[0], dtype=np.int64)
    stack = [(tree.root, np.arange(points.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if isinstance(node, Leaf):
            labels[idx] = node.cluster
            continue
        mask = points[idx, node.cut.dim] <= node.cut.theta
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return labels


def induced_partition(tree: ThresholdTree, ds: Dataset) -> Partition:
    """Partition of ``ds`` whose cluster ``i`` holds the points routed to leaf ``i``.

    Empty clusters are kept; see ``Partition.empty_clusters``.
    """
    return Partition.from_labels(assign(tree, ds.points), tree.k)


def is_structurally_valid(tree: ThresholdTree, d: int) -> bool:
    return tree.max_dim < d


def all_leaves_nonempty(tree: ThresholdTree, ds: Dataset) -> bool:
    return not induced_partition(tree, ds).empty_clusters


def leaf_boxes(tree: ThresholdTree, d: int) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Axis-aligned box of every leaf as half-open bounds ``(lo, hi]`` per dimension."""
    tree.check_dimension(d)
    out = {}
    stack = [(tree.root, np.full(d, -np.inf), np.full(d, np.inf))]
    while stack:
        node, lo, hi = stack.pop()
        if isinstance(node, Leaf):
            out[node.cluster] = (lo, hi)
            continue
        c = node.cut
        lhi = hi.copy()
        lhi[c.dim] = min(hi[c.dim], c.theta)
        rlo = lo.copy()
        rlo[c.dim] = max(lo[c.dim], c.theta)
        stack.append((node.left, lo, lhi))
        stack.append((node.right, rlo, hi))
    return out


def _to_obj(node: Node):
    if isinstance(node, Leaf):
        return {"leaf": node.cluster}
    return {
        "cut": {"dim": node.cut.dim, "theta": node.cut.theta},
        "left": _to_obj(node.left),
        "right": _to_obj(node.right),
    }


def _from_obj(obj) -> Node:
    if not isinstance(obj, dict):
        raise TreeError(f"tree node must be a JSON object, got {type(obj).__name__}")
    if "leaf" in obj:
        if set(obj) != {"leaf"}:
            raise TreeError(f"leaf node has extra fields: {sorted(set(obj) - {'leaf'})}")
        cid = obj["leaf"]
        if isinstance(cid, bool) or not isinstance(cid, int):
            raise TreeError(f"leaf id must be an integer, got {cid!r}")
        return Leaf(cid)
    missing = {"cut", "left", "right"} - set(obj)
    if missing:
        raise TreeError(f"internal node missing fields: {sorted(missing)}")
    if set(obj) != {"cut", "left", "right"}:
        raise TreeError(f"internal node has extra fields: {sorted(set(obj) - {'cut', 'left', 'right'})}")
    cut = obj["cut"]
    if not isinstance(cut, dict) or set(cut) != {"dim", "theta"}:
        raise TreeError("cut must be an object with exactly 'dim' and 'theta'")
    dim, theta = cut["dim"], cut["theta"]
    if isinstance(theta, bool) or not isinstance(theta, (int, float)):
        raise TreeError(f"theta must be a number, got {theta!r}")
    return Split(AxisCut(dim, float(theta)), _from_obj(obj["left"]), _from_obj(obj["right"]))


def to_dict(tree: ThresholdTree) -> dict:
    return _to_obj(tree.root)


def from_dict(obj) -> ThresholdTree:
    return ThresholdTree(_from_obj(obj))


def serialize(tree: ThresholdTree) -> str:
    return json.dumps(to_dict(tree), separators=(",", ":"), allow_nan=False)


def deserialize(text: str) -> ThresholdTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"malformed tree JSON: {exc}") from None
    return from_dict(obj)
