"""Domain types and the objective functions shared by the fitting algorithms.

Data matrices and direction matrices are plain ``(n, p)`` float arrays; the
ellipsoid parameters and cluster models are small dataclasses that validate
themselves on construction.

Conventions
-----------
``full_objective`` and ``cluster_objective`` return *sums* over samples,
``reduced_objective`` returns the *mean* residual.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidParameterError, DataError

UNIT_TOL = 1e-12


def as_data_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a finite ``(n, p)`` float array with n, p >= 1."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional (n, p), got shape {arr.shape}")
    n, p = arr.shape
    if n < 1 or p < 1:
        raise DataError(f"{name} must have at least one row and one column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"{name} has a non-finite entry at row {i}, column {j}")
    return arr


def _as_vector(v, p: int | None, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a 1-dimensional vector, got shape {arr.shape}")
    if p is not None and arr.shape[0] != p:
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {p}")
    return arr


@dataclass(frozen=True)
class EllipseParams:
    """Axis-aligned ellipsoid ``{x : ||w * (x - mu)|| = 1}``.

    ``w`` holds inverse half-axis lengths and must lie in the box
    ``[lambda_lo, lambda_hi]`` coordinatewise.
    """

    mu: np.ndarray
    w: np.ndarray
    lambda_lo: float
    lambda_hi: float

    def __post_init__(self):
        mu = _as_vector(self.mu, None, "mu")
        w = _as_vector(self.w, mu.shape[0], "w")
        lo, hi = float(self.lambda_lo), float(self.lambda_hi)
        if not (0 < lo <= hi) or not np.isfinite(hi):
            raise InvalidParameterError(f"need 0 < lambda_lo <= lambda_hi, got [{lo}, {hi}]")
        if not np.all(np.isfinite(mu)):
            raise InvalidParameterError("mu must be finite")
        if np.any(w < lo) or np.any(w > hi):
            raise InvalidParameterError(f"w={w} lies outside the box [{lo}, {hi}]")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "lambda_lo", lo)
        object.__setattr__(self, "lambda_hi", hi)

    @property
    def p(self) -> int:
        return self.mu.shape[0]

    @property
    def radii(self) -> np.ndarray:
        return 1.0 / self.w

    def __eq__(self, other):
        if not isinstance(other, EllipseParams):
            return NotImplemented
        return (
            np.array_equal(self.mu, other.mu)
            and np.array_equal(self.w, other.w)
            and self.lambda_lo == other.lambda_lo
            and self.lambda_hi == other.lambda_hi
        )

    __hash__ = None


@dataclass(frozen=True)
class ClusterModel:
    """``k`` ellipsoids plus a 0-based assignment vector (``0 <= c_i < k``)."""

    ellipses: tuple
    assignments: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        ellipses = tuple(self.ellipses)
        if not ellipses:
            raise InvalidParameterError("a cluster model needs at least one ellipse")
        p = ellipses[0].p
        if any(e.p != p for e in ellipses):
            raise DimensionError("all ellipses of a model must share the same dimension")
        c = np.asarray(self.assignments, dtype=np.int64)
        if c.ndim != 1:
            raise DimensionError("assignments must be a 1-dimensional vector")
        if c.size and (c.min() < 0 or c.max() >= len(ellipses)):
            raise InvalidParameterError(f"assignments must lie in [0, {len(ellipses) - 1}]")
        object.__setattr__(self, "ellipses", ellipses)
        object.__setattr__(self, "assignments", c)

    @property
    def k(self) -> int:
        return len(self.ellipses)

    @property
    def p(self) -> int:
        return self.ellipses[0].p

    @property
    def centers(self) -> np.ndarray:
        """``(k, p)`` matrix of centers, one row per cluster."""
        return np.stack([e.mu for e in self.ellipses])

    @property
    def weights(self) -> np.ndarray:
        """``(k, p)`` matrix of inverse half-axis lengths."""
        return np.stack([e.w for e in self.ellipses])


def _check_dims(X: np.ndarray, p: int):
    if X.shape[1] != p:
        raise DimensionError(f"data has {X.shape[1]} columns but the ellipse has dimension {p}")


def weighted_norms(X: np.ndarray, params: EllipseParams) -> np.ndarray:
    """Row norms ``||w * (x_i - mu)||``."""
    X = np.asarray(X, dtype=float)
    _check_dims(X, params.p)
    return np.linalg.norm(params.w * (X - params.mu), axis=1)


def residuals(X, params: EllipseParams) -> np.ndarray:
    """Vector of per-sample residuals ``(||w * (x_i - mu)|| - 1)**2``."""
    X = as_data_matrix(X)
    return (weighted_norms(X, params) - 1.0) ** 2


def point_residual(x, params: EllipseParams) -> float:
    """Squared radial misfit of a single point; equals 1 at the center."""
    x = _as_vector(x, params.p, "x")
    return float((np.linalg.norm(params.w * (x - params.mu)) - 1.0) ** 2)


def full_objective(X, params: EllipseParams, U) -> float:
    """Sum of ``||w * (x_i - mu) - u_i||**2`` over samples."""
    X = as_data_matrix(X)
    _check_dims(X, params.p)
    U = np.asarray(U, dtype=float)
    if U.shape != X.shape:
        raise DimensionError(f"direction matrix has shape {U.shape}, expected {X.shape}")
    diff = params.w * (X - params.mu) - U
    return float(np.sum(diff * diff))


def reduced_objective(X, params: EllipseParams) -> float:
    """Mean residual over samples: ``full_objective`` with optimal directions, divided by n."""
    return float(np.mean(residuals(X, params)))


def residual_matrix(X, ellipses) -> np.ndarray:
    """``(n, k)`` matrix of residuals of every sample under every ellipse."""
    X = as_data_matrix(X)
    ellipses = list(ellipses)
    if not ellipses:
        raise InvalidParameterError("need at least one ellipse")
    return np.stack([residuals(X, e) for e in ellipses], axis=1)


def cluster_objective(X, model: ClusterModel) -> float:
    """Sum over samples of the smallest residual across the model's ellipses.

    The stored assignments are ignored, so this lower-bounds
    :func:`assigned_objective` for any assignment vector.
    """
    return float(np.sum(residual_matrix(X, model.ellipses).min(axis=1)))


def assigned_objective(X, model: ClusterModel) -> float:
    """Sum of each sample's residual under the ellipse it is assigned to."""
    R = residual_matrix(X, model.ellipses)
    c = model.assignments
    if c.shape[0] != R.shape[0]:
        raise DimensionError(f"model has {c.shape[0]} assignments for {R.shape[0]} samples")
    return float(np.sum(R[np.arange(R.shape[0]), c]))
