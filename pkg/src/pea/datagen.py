"""Synthetic point clouds on noisy ellipse arcs, plus standardization helpers.

Randomness
----------
All generators use numpy's PCG64 bit generator (``numpy.random.default_rng``).
An integer seed is expanded with ``numpy.random.SeedSequence``; where a
generator needs several independent streams (one per cluster) they come from
``SeedSequence(seed).spawn(m)`` in cluster order. Within one stream the arc
angles are drawn first (``n`` uniforms), then the noise (``n x p`` normals,
row-major).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_data_matrix
from .errors import DataError, InvalidParameterError

SD_TOL = 1e-12


@dataclass(frozen=True)
class ArcSpec:
    """Planar arc ``center + (r1 cos t, r2 sin t)`` for ``t`` in ``[theta_lo, theta_hi]``.

    ``theta_lo == theta_hi`` is allowed and pins every sample to one angle.
    """

    center: tuple = (0.0, 0.0)
    radii: tuple = (1.0, 1.0)
    theta_lo: float = 0.0
    theta_hi: float = 2 * np.pi
    n: int = 100
    noise_sd: float = 0.0

    def __post_init__(self):
        if len(self.center) != 2 or len(self.radii) != 2:
            raise InvalidParameterError("arcs are planar: center and radii need length 2")
        if min(self.radii) <= 0:
            raise InvalidParameterError(f"radii must be positive, got {self.radii}")
        if self.theta_lo > self.theta_hi:
            raise InvalidParameterError("theta_lo must not exceed theta_hi")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n}")
        if self.noise_sd < 0:
            raise InvalidParameterError(f"noise_sd must be nonnegative, got {self.noise_sd}")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_arc(spec: ArcSpec, seed=None) -> np.ndarray:
    """Sample ``spec.n`` points uniformly in angle along the arc, with Gaussian noise."""
    rng = _rng(seed)
    theta = rng.uniform(spec.theta_lo, spec.theta_hi, size=spec.n)
    pts = np.column_stack([
        spec.radii[0] * np.cos(theta) + spec.center[0],
        spec.radii[1] * np.sin(theta) + spec.center[1],
    ])
    noise = rng.standard_normal(size=pts.shape)
    if spec.noise_sd > 0:
        pts = pts + spec.noise_sd * noise
    return pts


def ellipse_grid(center, radii, n: int) -> np.ndarray:
    """``n`` noiseless points at equally spaced angles in ``[0, 2 pi)`` on an axis-aligned ellipse."""
    theta = 2 * np.pi * np.arange(n) / n
    return np.column_stack([radii[0] * np.cos(theta) + center[0],
                            radii[1] * np.sin(theta) + center[1]])


def motivating_arcs(noise_sd: float = 0.3, n_per: int = 100):
    """Arc specs of the two-cluster example: the upper arc of the 4x3 ellipse and a copy shifted up by 2."""
    common = dict(radii=(4.0, 3.0), theta_lo=np.pi / 4, theta_hi=3 * np.pi / 4,
                  n=n_per, noise_sd=noise_sd)
    return ArcSpec(center=(0.0, 0.0), **common), ArcSpec(center=(0.0, 2.0), **common)


def gen_motivating(seed=0, noise_sd: float = 0.3, standardize: bool = True):
    """Two stacked noisy arcs, 100 points each, z-scored jointly.

    Returns ``(X, labels)`` with labels ``0`` for the lower and ``1`` for the
    upper arc.
    """
    streams = np.random.SeedSequence(seed).spawn(2)
    specs = motivating_arcs(noise_sd)
    X = np.vstack([gen_arc(s, np.random.default_rng(ss)) for s, ss in zip(specs, streams)])
    labels = np.repeat(np.arange(2), [s.n for s in specs])
    if standardize:
        X = zscore(X)
    return X, labels


def zscore(X) -> np.ndarray:
    """Center each column and divide by its population standard deviation."""
    X = as_data_matrix(X)
    if X.shape[0] < 2:
        raise DataError("z-scoring needs at least 2 samples")
    sd = X.std(axis=0)
    flat = np.flatnonzero(sd <= SD_TOL)
    if flat.size:
        raise DataError(f"column {flat[0] + 1} is constant and cannot be standardized")
    return (X - X.mean(axis=0)) / sd


def screen_variance(X, m: int):
    """Keep the ``m`` highest-variance columns, returned in their original order.

    Ties in variance prefer the lower column index. This is a plain variance
    filter, not a feature-selection procedure with any optimality claim.

    Returns
    -------
    (X_kept, kept) : ndarray, ndarray of 0-based column indices
    """
    X = as_data_matrix(X)
    p = X.shape[1]
    if int(m) != m or not 1 <= m <= p:
        raise InvalidParameterError(f"m must lie in [1, {p}], got {m}")
    var = X.var(axis=0)
    order = np.lexsort((np.arange(p), -var))
    kept = np.sort(order[:m])
    return X[:, kept], kept
