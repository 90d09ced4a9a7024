"""k-ellipse clustering: Lloyd-style alternation of refit and reassignment.

Every outer iteration runs one block-coordinate pass per cluster over that
cluster's members, warm-started from its current ellipse, then moves every
point to the ellipse with the smallest residual. Both steps can only lower
the sum of residuals at the stored assignments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    ClusterModel,
    EllipseParams,
    as_data_matrix,
    assigned_objective,
    residual_matrix,
)
from .errors import DimensionError, InvalidParameterError
from .fit import FitConfig, fit, init_params
from .kmeans import lloyd

MAX_DISTANCE_K = 10


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    fit: FitConfig = field(default_factory=FitConfig)
    max_outer_iter: int = 1000
    n_init: int = 10
    seed: int = 0
    inner_passes: int = 1  # BCD passes per cluster per outer iteration

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParameterError(f"k must be a positive integer, got {self.k}")
        for name in ("max_outer_iter", "n_init", "inner_passes"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be >= 1")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class ClusterResult:
    model: ClusterModel
    objective_trace: list  # summed residuals at stored assignments, after every step
    iterations: int
    converged: bool

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def assign(X, ellipses) -> np.ndarray:
    """Index of the lowest-residual ellipse for every sample (ties to the lowest index)."""
    return np.argmin(residual_matrix(X, ellipses), axis=1).astype(np.int64)


def _worst_point(X, model: ClusterModel, exclude=()) -> int:
    R = residual_matrix(X, model.ellipses)
    c = model.assignments
    own = R[np.arange(X.shape[0]), c].copy()
    if exclude:
        own[list(exclude)] = -np.inf
    return int(np.argmax(own))


def handle_empty_cluster(X, model: ClusterModel, empty_j: int) -> EllipseParams:
    """Reseed cluster ``empty_j`` at the worst-fit point.

    The new center is the sample with the largest residual under its
    assigned ellipse; the new weights are copied from that ellipse.
    """
    X = as_data_matrix(X)
    i = _worst_point(X, model)
    src = model.ellipses[model.assignments[i]]
    return EllipseParams(X[i].copy(), src.w.copy(), src.lambda_lo, src.lambda_hi)


def refit_clusters(X, assignments, model: ClusterModel, fit_cfg: FitConfig,
                   passes: int = 1) -> ClusterModel:
    """One refit step: ``passes`` BCD passes per cluster on its current members.

    Empty clusters are first reseeded at the worst-fit point, which is moved
    into the reseeded cluster; a single pass then puts that point exactly on
    the new ellipse.
    """
    X = as_data_matrix(X)
    c = np.array(assignments, dtype=np.int64)
    if c.shape != (X.shape[0],):
        raise DimensionError(f"got {c.shape[0]} assignments for {X.shape[0]} samples")
    if X.shape[1] != model.p:
        raise DimensionError(f"data has {X.shape[1]} columns, model has dimension {model.p}")
    ellipses = list(model.ellipses)
    counts = np.bincount(c, minlength=model.k)
    moved = []
    for j in np.flatnonzero(counts == 0):
        current = ClusterModel(ellipses, c)
        # never empty a cluster while filling another
        sole_members = [i for i in range(X.shape[0]) if counts[c[i]] <= 1]
        i = _worst_point(X, current, exclude=moved + sole_members)
        src = ellipses[c[i]]
        ellipses[j] = EllipseParams(X[i].copy(), src.w.copy(), src.lambda_lo, src.lambda_hi)
        counts[c[i]] -= 1
        counts[j] += 1
        c[i] = j
        moved.append(i)

    cfg = FitConfig(fit_cfg.lambda_lo, fit_cfg.lambda_hi, max_iter=passes,
                    tol=fit_cfg.tol, seed=fit_cfg.seed)
    refit = []
    for j, e in enumerate(ellipses):
        members = X[c == j]
        if members.shape[0] == 0:
            # only reachable when k exceeds the number of distinct donors
            refit.append(e)
            continue
        refit.append(fit(members, cfg, init=e).params)
    return ClusterModel(refit, c)


def cluster(X, config: ClusterConfig, init_assignments=None) -> ClusterResult:
    """Partition ``X`` into ``config.k`` clusters, each modelled by an ellipsoid.

    Starts from the best k-means partition over ``config.n_init`` restarts
    (or from ``init_assignments``, 0-based) and stops once an outer
    iteration leaves the assignments unchanged and changes the objective by
    at most ``fit.tol * max(1, f)``.
    """
    X = as_data_matrix(X)
    n = X.shape[0]
    if config.k > n:
        raise InvalidParameterError(f"k={config.k} exceeds the number of samples n={n}")
    if init_assignments is None:
        c = lloyd(X, config.k, n_init=config.n_init, seed=config.seed).assignments
    else:
        c = np.asarray(init_assignments, dtype=np.int64)
        if c.shape != (n,):
            raise DimensionError(f"got {c.shape[0]} initial assignments for {n} samples")
        if c.min() < 0 or c.max() >= config.k or np.bincount(c, minlength=config.k).min() == 0:
            raise InvalidParameterError(f"initial assignments must use every cluster 0..{config.k - 1}")
    ellipses = [init_params(X[c == j], config.fit) for j in range(config.k)]
    model = ClusterModel(ellipses, c)
    trace = [assigned_objective(X, model)]
    tol = config.fit.tol
    converged = False
    it = 0
    for it in range(1, config.max_outer_iter + 1):
        before = trace[-1]
        model = refit_clusters(X, model.assignments, model, config.fit, config.inner_passes)
        trace.append(assigned_objective(X, model))
        new_c = assign(X, model.ellipses)
        stable = np.array_equal(new_c, model.assignments)
        model = ClusterModel(model.ellipses, new_c)
        f = assigned_objective(X, model)
        trace.append(f)
        if stable and abs(before - f) <= tol * max(1.0, before):
            converged = True
            break
    return ClusterResult(model, trace, it, converged)


def model_distance(a: ClusterModel, b: ClusterModel) -> float:
    """Squared Frobenius distance between two models, minimized over cluster relabelings.

    ``min_perm ||W_a - P W_b||_F^2 + ||M_a - P M_b||_F^2``. The cost is a sum
    of per-row terms, so the minimizing permutation is found exactly by
    linear assignment.
    """
    if a.k != b.k or a.p != b.p:
        raise DimensionError(f"models differ in shape: k={a.k}/{b.k}, p={a.p}/{b.p}")
    if a.k > MAX_DISTANCE_K:
        raise InvalidParameterError(
            f"model_distance supports k <= {MAX_DISTANCE_K} "
            f"({factorial(MAX_DISTANCE_K)} relabelings), got k={a.k}"
        )
    Wa, Wb, Ma, Mb = a.weights, b.weights, a.centers, b.centers
    cost = (((Wa[:, None, :] - Wb[None, :, :]) ** 2).sum(axis=2)
            + ((Ma[:, None, :] - Mb[None, :, :]) ** 2).sum(axis=2))
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())
