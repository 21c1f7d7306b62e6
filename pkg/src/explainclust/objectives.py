"""Clustering objectives and their optimal per-cluster representatives.

k-means uses squared L2 to the centroid, k-medians L1 to the
coordinate-wise median, k-centers the L2 radius around the minimum
enclosing ball center. Spacing is the smallest distance between two points
in different clusters, under a configurable metric.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .data import Dataset, Metric, pairwise
from .errors import EmptyClusterError
from .tree import Partition


class Kind(str, enum.Enum):
    KMEANS = "k-means"
    KMEDIANS = "k-medians"
    KCENTERS = "k-centers"
    SPACING = "spacing"


@dataclass(frozen=True)
class Objective:
    kind: Kind
    metric: Metric = Metric.L2  # only consulted for spacing

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "metric", Metric.parse(self.metric))

    @classmethod
    def parse(cls, name: str, metric: "str | Metric" = Metric.L2) -> "Objective":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "kmeans": Kind.KMEANS, "k-means": Kind.KMEANS,
            "kmedians": Kind.KMEDIANS, "k-medians": Kind.KMEDIANS,
            "kcenters": Kind.KCENTERS, "k-centers": Kind.KCENTERS,
            "kcenter": Kind.KCENTERS, "k-center": Kind.KCENTERS,
            "spacing": Kind.SPACING, "max-spacing": Kind.SPACING,
        }
        if key not in aliases:
            raise ValueError(f"unknown objective {name!r}")
        return cls(aliases[key], metric)

    @property
    def maximize(self) -> bool:
        return self.kind is Kind.SPACING

    @property
    def center_based(self) -> bool:
        return self.kind is not Kind.SPACING


KMEANS = Objective(Kind.KMEANS)
KMEDIANS = Objective(Kind.KMEDIANS)
KCENTERS = Objective(Kind.KCENTERS)
SPACING = Objective(Kind.SPACING)


def _members(cluster: Iterable[int], ds: Dataset) -> np.ndarray:
    idx = list(cluster)
    if not idx:
        raise EmptyClusterError("cluster is empty")
    return ds.points[idx]


def centroid(cluster: Iterable[int], ds: Dataset) -> np.ndarray:
    return _members(cluster, ds).mean(axis=0)


def coordinate_median(cluster: Iterable[int], ds: Dataset) -> np.ndarray:
    """Per-coordinate median; the lower median for even cluster sizes."""
    pts = np.sort(_members(cluster, ds), axis=0)
    return pts[(pts.shape[0] - 1) // 2].copy()


def _ball_through(support: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest ball having every support point on its boundary.

    The center lies in the affine hull of the support; it solves the Gram
    system ``2 V V^T lam = |V|^2`` with ``V`` the offsets from the first point.
    """
    if not support:
        return np.zeros(0), -1.0
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    V = np.array([p - p0 for p in support[1:]])
    G = 2.0 * V @ V.T
    rhs = (V * V).sum(axis=1)
    lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    center = p0 + lam @ V
    radius = max(float(np.linalg.norm(center - p)) for p in support)
    return center, radius


def _welzl(pts: np.ndarray, n: int, support: list[np.ndarray], d: int):
    center, radius = _ball_through(support)
    if len(support) == d + 1:
        return center, radius
    for i in range(n):
        p = pts[i]
        if radius < 0 or np.linalg.norm(p - center) > radius * (1 + 1e-12) + 1e-15:
            center, radius = _welzl(pts, i, support + [p], d)
    return center, radius


def meb_center(cluster: Iterable[int], ds: Dataset) -> tuple[np.ndarray, float]:
    """Exact minimum enclosing L2 ball of a cluster, as ``(center, radius)``.

    Welzl's algorithm in its iterative-prefix form; the recursion depth is
    bounded by ``d + 1``. The returned radius is the max distance from the
    returned center to the cluster points.
    """
    pts = np.unique(_members(cluster, ds), axis=0)
    # fixed shuffle: expected linear time without affecting the (unique) answer
    pts = pts[np.random.default_rng(0).permutation(pts.shape[0])]
    center, _ = _welzl(pts, pts.shape[0], [], pts.shape[1])
    radius = float(np.sqrt(((pts - center) ** 2).sum(axis=1)).max())
    return center, radius


_REPRESENTATIVE = {
    Kind.KMEANS: centroid,
    Kind.KMEDIANS: coordinate_median,
    Kind.KCENTERS: lambda c, ds: meb_center(c, ds)[0],
}


def optimal_representatives(partition: Partition, ds: Dataset, obj: Objective) -> list[Optional[np.ndarray]]:
    """Cost-minimising representative per cluster; ``None`` for empty clusters."""
    if not obj.center_based:
        raise ValueError("spacing has no representatives")
    fn = _REPRESENTATIVE[obj.kind]
    return [fn(c, ds) if c else None for c in partition.clusters]


def cluster_cost(members: np.ndarray, rep: np.ndarray, kind: Kind) -> float:
    diff = members - rep
    if kind is Kind.KMEANS:
        return float((diff * diff).sum())
    if kind is Kind.KMEDIANS:
        return float(np.abs(diff).sum())
    if kind is Kind.KCENTERS:
        return float(np.sqrt((diff * diff).sum(axis=1)).max())
    raise ValueError(f"{kind} is not center-based")


def spacing(partition: Partition, ds: Dataset, metric: "str | Metric" = Metric.L2) -> float:
    groups = [c for c in partition.clusters if c]
    if len(groups) < 2:
        raise ValueError("spacing needs at least two non-empty clusters")
    labels = partition.labels()
    best = math.inf
    pts = ds.points
    # row blocks keep the distance matrix bounded for large n
    step = max(1, 4_000_000 // max(1, ds.n * ds.d))
    for start in range(0, ds.n, step):
        stop = min(ds.n, start + step)
        D = pairwise(pts[start:stop], pts, metric)
        cross = labels[start:stop, None] != labels[None, :]
        if cross.any():
            best = min(best, float(D[cross].min()))
    return best


def cost(partition: Partition, ds: Dataset, obj: Objective) -> float:
    """Objective value of ``partition`` on ``ds``.

    For the center-based objectives the partition's own representatives are
    used when present; otherwise the optimal ones are computed, which fails
    on empty clusters. With supplied representatives an empty cluster adds
    nothing (sums) or is skipped (max).
    """
    if partition.n != ds.n:
        raise ValueError(f"partition covers {partition.n} points, dataset has {ds.n}")
    if obj.kind is Kind.SPACING:
        return spacing(partition, ds, obj.metric)

    reps: Sequence
    if partition.representatives is not None:
        reps = [np.asarray(r, dtype=np.float64) for r in partition.representatives]
        if reps and reps[0].shape[0] != ds.d:
            raise ValueError(f"representatives have dimension {reps[0].shape[0]}, data has {ds.d}")
    else:
        if partition.empty_clusters:
            raise EmptyClusterError(
                f"clusters {partition.empty_clusters} are empty and no representatives were given"
            )
        reps = optimal_representatives(partition, ds, obj)

    values = [
        cluster_cost(ds.points[list(c)], r, obj.kind)
        for c, r in zip(partition.clusters, reps)
        if c
    ]
    if obj.kind is Kind.KCENTERS:
        return max(values) if values else 0.0
    return float(sum(values))
