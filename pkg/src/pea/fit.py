"""Block-coordinate descent fit of a single axis-aligned ellipsoid.

Each iteration minimizes ``sum_i ||w * (x_i - mu) - u_i||**2`` exactly over
one block at a time, in the order directions ``U``, center ``mu``, weights
``w``. All three block minimizers are closed form, so the objective never
increases.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import EllipseParams, as_data_matrix
from .errors import DimensionError, InvalidParameterError

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class FitConfig:
    """Settings for :func:`fit`.

    ``lambda_lo`` and ``lambda_hi`` bound every inverse half-axis length, so
    radii are confined to ``[1/lambda_hi, 1/lambda_lo]``. ``tol`` is a
    relative threshold on the change of the objective between iterations.
    """

    lambda_lo: float = 0.05
    lambda_hi: float = 20.0
    max_iter: int = 500
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.lambda_lo <= self.lambda_hi) or not np.isfinite(self.lambda_hi):
            raise InvalidParameterError(
                f"need 0 < lambda_lo <= lambda_hi, got [{self.lambda_lo}, {self.lambda_hi}]"
            )
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidParameterError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not self.tol > 0:
            raise InvalidParameterError(f"tol must be positive, got {self.tol}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class FitReport:
    params: EllipseParams
    directions: np.ndarray
    objective_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    # objective after each individual block update (three entries per iteration)
    step_trace: list = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def clamp(x: float, lo: float, hi: float) -> float:
    """Project ``x`` onto ``[lo, hi]``."""
    if lo > hi:
        raise InvalidParameterError(f"clamp needs lo <= hi, got [{lo}, {hi}]")
    if x < lo:
        return lo
    if x > hi:
        return hi
    return x


def _directions(X, mu, w):
    Z = w * (X - mu)
    norms = np.linalg.norm(Z, axis=1)
    degenerate = norms < DEGENERATE_TOL
    U = Z / np.where(degenerate, 1.0, norms)[:, None]
    if degenerate.any():
        # any unit vector is optimal at the center; e1 keeps fits deterministic
        U[degenerate] = 0.0
        U[degenerate, 0] = 1.0
    return U


def _center(X, w, U):
    return X.mean(axis=0) - U.sum(axis=0) / (X.shape[0] * w)


def _weights(X, mu, U, lo, hi):
    D = X - mu
    num = np.sum(U * D, axis=0)
    den = np.sum(D * D, axis=0)
    flat = den < DEGENERATE_TOL
    ratio = num / np.where(flat, 1.0, den)
    # no spread along a coordinate: tightest admissible axis
    return np.where(flat, hi, np.clip(ratio, lo, hi))


def _objective(X, mu, w, U):
    diff = w * (X - mu) - U
    return float(np.sum(diff * diff))


def update_directions(X, params: EllipseParams) -> np.ndarray:
    """Optimal unit directions for fixed ``mu`` and ``w``.

    Row ``i`` is ``w * (x_i - mu)`` normalized; rows whose weighted norm is
    below 1e-12 are set to the first basis vector.
    """
    X = as_data_matrix(X)
    if X.shape[1] != params.p:
        raise DimensionError(f"data has {X.shape[1]} columns, ellipse has dimension {params.p}")
    return _directions(X, params.mu, params.w)


def _check_xu(X, U):
    X = as_data_matrix(X)
    U = np.asarray(U, dtype=float)
    if U.shape != X.shape:
        raise DimensionError(f"direction matrix has shape {U.shape}, expected {X.shape}")
    return X, U


def update_center(X, w, U) -> np.ndarray:
    """Optimal center for fixed ``w`` and ``U``: ``mean(x) - sum(u) / (n w)``."""
    X, U = _check_xu(X, U)
    w = np.asarray(w, dtype=float)
    if w.shape != (X.shape[1],):
        raise DimensionError(f"w has shape {w.shape}, expected ({X.shape[1]},)")
    if np.any(w <= 0):
        raise InvalidParameterError(f"weights must be positive, got {w}")
    return _center(X, w, U)


def update_weights(X, mu, U, lo: float, hi: float) -> np.ndarray:
    """Optimal box-constrained weights for fixed ``mu`` and ``U``.

    Coordinates with ``sum (x_il - mu_l)**2 < 1e-12`` get ``hi``.
    """
    X, U = _check_xu(X, U)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (X.shape[1],):
        raise DimensionError(f"mu has shape {mu.shape}, expected ({X.shape[1]},)")
    if lo > hi:
        raise InvalidParameterError(f"need lo <= hi, got [{lo}, {hi}]")
    return _weights(X, mu, U, lo, hi)


def init_params(X, config: FitConfig) -> EllipseParams:
    """Start from the column means and clamped inverse (population) standard deviations."""
    X = as_data_matrix(X)
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    flat = sd < DEGENERATE_TOL
    w = np.where(flat, config.lambda_hi,
                 np.clip(1.0 / np.where(flat, 1.0, sd), config.lambda_lo, config.lambda_hi))
    return EllipseParams(mu, w, config.lambda_lo, config.lambda_hi)


def fit(X, config: FitConfig | None = None, init: EllipseParams | None = None) -> FitReport:
    """Fit one ellipsoid to ``X`` by block-coordinate descent.

    Parameters
    ----------
    X : (n, p) array
    config : FitConfig, optional
    init : EllipseParams, optional
        Starting point; defaults to :func:`init_params`. Its box bounds are
        replaced by the ones in ``config``.

    Returns
    -------
    FitReport
        ``objective_trace[t]`` is the full (summed) objective after
        iteration ``t``. The run counts as converged once two consecutive
        entries differ by at most ``tol * max(1, previous)``.
    """
    config = config or FitConfig()
    X = as_data_matrix(X)
    lo, hi = config.lambda_lo, config.lambda_hi
    if init is None:
        init = init_params(X, config)
    elif init.p != X.shape[1]:
        raise DimensionError(f"init has dimension {init.p}, data has {X.shape[1]} columns")
    mu = init.mu.copy()
    w = np.clip(init.w, lo, hi)

    trace, steps = [], []
    converged = False
    U = None
    for _ in range(config.max_iter):
        U = _directions(X, mu, w)
        steps.append(_objective(X, mu, w, U))
        mu = _center(X, w, U)
        steps.append(_objective(X, mu, w, U))
        w = _weights(X, mu, U, lo, hi)
        f = _objective(X, mu, w, U)
        steps.append(f)
        if trace and abs(trace[-1] - f) <= config.tol * max(1.0, trace[-1]):
            trace.append(f)
            converged = True
            break
        trace.append(f)

    params = EllipseParams(mu, w, lo, hi)
    return FitReport(
        params=params,
        directions=U,
        objective_trace=trace,
        iterations=len(trace),
        converged=converged,
        step_trace=steps,
    )


__all__ = [
    "FitConfig",
    "FitReport",
    "clamp",
    "update_directions",
    "update_center",
    "update_weights",
    "init_params",
    "fit",
]
