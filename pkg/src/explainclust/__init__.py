"""Explainable clustering with axis-aligned threshold trees."""

from .data import Dataset, Metric, dist, load_dataset
from .errors import ExplainClustError, LimitExceeded
from .maxspacing import fit
from .objectives import KCENTERS, KMEANS, KMEDIANS, SPACING, Kind, Objective, cost
from .oracles import optimal_explainable, unrestricted_max_spacing
from .tree import AxisCut, Partition, ThresholdTree, induced_partition, route

__all__ = [
    "AxisCut", "Dataset", "ExplainClustError", "KCENTERS", "KMEANS", "KMEDIANS", "Kind",
    "LimitExceeded", "Metric", "Objective", "Partition", "SPACING", "ThresholdTree", "cost",
    "dist", "fit", "induced_partition", "load_dataset", "optimal_explainable", "route",
    "unrestricted_max_spacing",
]
