"""Partition agreement indices: NMI, ARI and CER.

All three are computed from the contingency table of the two labelings, so
they are invariant to renaming labels in either argument. Labels may be any
values ``numpy.unique`` can sort (ints, strings).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionError, DataError


@dataclass(frozen=True)
class PartitionMetrics:
    nmi: float
    ari: float
    cer: float

    def as_dict(self) -> dict:
        return asdict(self)


def contingency(a, b) -> np.ndarray:
    """``(r, s)`` table of co-occurrence counts between two labelings."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionError("labelings must be 1-dimensional")
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"labelings differ in length: {a.shape[0]} vs {b.shape[0]}")
    ia, r = _codes(a)
    ib, s = _codes(b)
    return np.bincount(ia * s + ib, minlength=r * s).reshape(r, s).astype(np.int64)


def _codes(a):
    # non-negative integer labels index the table directly; empty rows or
    # columns do not change any of the indices computed from it
    if a.dtype.kind in "iu" and (a.size == 0 or (a.min() >= 0 and a.max() < 4 * a.size + 64)):
        return a.astype(np.int64), int(a.max(initial=-1)) + 1
    uniq, inv = np.unique(a, return_inverse=True)
    return inv.ravel(), len(uniq)


def _comb2(x):
    return x * (x - 1) // 2


def _pair_counts(a, b):
    table = contingency(a, b)
    n = int(table.sum())
    if n < 2:
        raise DataError(f"pair-counting indices need at least 2 samples, got {n}")
    both = int(_comb2(table).sum())
    in_a = int(_comb2(table.sum(axis=1)).sum())
    in_b = int(_comb2(table.sum(axis=0)).sum())
    return both, in_a, in_b, n * (n - 1) // 2


def ari(a, b) -> float:
    """Adjusted Rand index (Hubert & Arabie).

    Returns 1.0 when the chance-corrected denominator vanishes, which only
    happens when both partitions are the same trivial partition.
    """
    both, in_a, in_b, total = _pair_counts(a, b)
    expected = in_a * in_b / total
    top = 0.5 * (in_a + in_b)
    if top == expected:
        return 1.0
    return float((both - expected) / (top - expected))


def cer(a, b) -> float:
    """Fraction of sample pairs on which the partitions disagree about co-membership."""
    both, in_a, in_b, total = _pair_counts(a, b)
    return float((in_a + in_b - 2.0 * both) / total)


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(a, b) -> float:
    """Mutual information normalized by the geometric mean of the entropies (nats).

    Both partitions trivial gives 1; exactly one trivial gives 0.
    """
    table = contingency(a, b)
    n = table.sum()
    if n == 0:
        raise DataError("nmi needs at least one sample")
    rows, cols = table.sum(axis=1), table.sum(axis=0)
    ha = _entropy(rows, n)
    hb = _entropy(cols, n)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    i, j = np.nonzero(table)
    pij = table[i, j] / n
    mi = float(np.sum(pij * np.log(pij * n * n / (rows[i] * cols[j]))))
    # guard tiny negative or >1 drift from rounding
    return float(min(1.0, max(0.0, mi / np.sqrt(ha * hb))))


def evaluate(pred, truth) -> PartitionMetrics:
    return PartitionMetrics(nmi=nmi(pred, truth), ari=ari(pred, truth), cer=cer(pred, truth))
