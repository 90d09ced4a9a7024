"""Lloyd's k-means with k-means++ seeding.

Used both to initialize the ellipse clustering and as the baseline it is
compared against. Restarts draw independent streams from
``numpy.random.SeedSequence(seed).spawn(n_init)``, so the output depends only
on ``(X, k, n_init, max_iter, seed)`` and not on how many workers ran them.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import as_data_matrix
from .errors import InvalidParameterError


def worker_count(requested: int | None = None) -> int:
    """Number of worker threads, honouring the ``PEA_THREADS`` cap (0/unset = default)."""
    raw = os.environ.get("PEA_THREADS", "").strip()
    cap = 0
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise InvalidParameterError(f"PEA_THREADS must be an integer, got {raw!r}") from None
        if cap < 0:
            raise InvalidParameterError(f"PEA_THREADS must be >= 0, got {cap}")
    default = requested if requested is not None else (os.cpu_count() or 1)
    return max(1, min(default, cap) if cap else default)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_k(n: int, k: int):
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k}")
    if k > n:
        raise InvalidParameterError(f"k={k} exceeds the number of samples n={n}")


def _sq_dists(X, centers):
    # (n, k) squared Euclidean distances
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("nkp,nkp->nk", diff, diff)


def kmeanspp_init(X, k: int, seed=None) -> np.ndarray:
    """Pick ``k`` rows of ``X`` by D^2 sampling.

    The first center is uniform over the rows; each further center is drawn
    with probability proportional to the squared distance to the nearest
    center chosen so far. When all remaining distances are zero (duplicate
    points) the draw falls back to a uniform pick among unchosen rows.
    """
    X = as_data_matrix(X)
    n = X.shape[0]
    _check_k(n, k)
    rng = _rng(seed)
    chosen = [int(rng.integers(n))]
    d2 = np.sum((X - X[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            idx = int(free[rng.integers(free.size)])
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((X - X[idx]) ** 2, axis=1))
    return X[chosen].copy()


@dataclass
class KMeansResult:
    assignments: np.ndarray  # 0-based cluster index per sample
    centers: np.ndarray
    wcss: float
    iterations: int
    converged: bool
    trace: list  # WCSS after every assignment step


def _single_run(X, k, max_iter, rng) -> KMeansResult:
    centers = kmeanspp_init(X, k, rng)
    labels = None
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        D = _sq_dists(X, centers)
        new = np.argmin(D, axis=1)  # ties go to the lowest index
        trace.append(float(np.sum(D[np.arange(X.shape[0]), new])))
        if labels is not None and np.array_equal(new, labels):
            converged = True
            break
        labels = new
        counts = np.bincount(labels, minlength=k)
        if (counts == 0).any():
            # reseed each empty cluster with the point farthest from its center
            dmin = D[np.arange(X.shape[0]), labels].copy()
            for j in np.flatnonzero(counts == 0):
                far = int(np.argmax(np.where(counts[labels] > 1, dmin, -1.0)))
                counts[labels[far]] -= 1
                counts[j] += 1
                labels[far] = j
                dmin[far] = -1.0
        for j in range(k):
            centers[j] = X[labels == j].mean(axis=0)
    if not converged:
        D = _sq_dists(X, centers)
        labels = np.argmin(D, axis=1)
    wcss = float(np.sum((X - centers[labels]) ** 2))
    return KMeansResult(labels.astype(np.int64), centers, wcss, it, converged, trace)


def lloyd(X, k: int, n_init: int = 10, max_iter: int = 100, seed=0,
          n_jobs: int | None = None) -> KMeansResult:
    """Best of ``n_init`` k-means++-seeded Lloyd runs by within-cluster sum of squares.

    Ties between restarts go to the lower restart index.
    """
    X = as_data_matrix(X)
    _check_k(X.shape[0], k)
    if n_init < 1 or max_iter < 1:
        raise InvalidParameterError("n_init and max_iter must be >= 1")
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_init)]
    workers = min(worker_count(n_jobs), n_init)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda r: _single_run(X, k, max_iter, r), streams))
    else:
        runs = [_single_run(X, k, max_iter, r) for r in streams]
    best = runs[0]
    for run in runs[1:]:
        if run.wcss < best.wcss:
            best = run
    return best
