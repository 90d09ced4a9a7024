"""Principal elliptical analysis: axis-aligned ellipsoid fitting and k-ellipse clustering."""

__version__ = "0.1.0"

from .core import (
    ClusterModel,
    EllipseParams,
    assigned_objective,
    cluster_objective,
    full_objective,
    point_residual,
    reduced_objective,
)
from .fit import FitConfig, FitReport, fit
from .cluster import ClusterConfig, ClusterResult, cluster, model_distance
from .kmeans import lloyd
from .metrics import PartitionMetrics, ari, cer, evaluate, nmi

__all__ = [
    "ClusterConfig",
    "ClusterModel",
    "ClusterResult",
    "EllipseParams",
    "FitConfig",
    "FitReport",
    "PartitionMetrics",
    "ari",
    "assigned_objective",
    "cer",
    "cluster",
    "cluster_objective",
    "evaluate",
    "fit",
    "full_objective",
    "lloyd",
    "model_distance",
    "nmi",
    "point_residual",
    "reduced_objective",
]
