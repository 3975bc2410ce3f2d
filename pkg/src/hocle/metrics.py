"""External validity indices: clustering accuracy and NMI."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import Empty, LengthMismatch


def _pair(pred, truth):
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.size != truth.size:
        raise LengthMismatch(f"{pred.size} predictions for {truth.size} labels")
    return pred, truth


def contingency(pred, truth):
    """Counts ``C[a, b]`` of samples with predicted id ``a`` and true id ``b``."""
    pred, truth = _pair(pred, truth)
    C = np.zeros((pred.max(initial=-1) + 1, truth.max(initial=-1) + 1),
                 dtype=np.int64)
    np.add.at(C, (pred, truth), 1)
    return C


def best_mapping(counts):
    """Maximum-weight matching of predicted clusters to true classes.

    Returns ``(mapping, total)`` where ``mapping`` is a dict from predicted id
    to true id covering ``min(rows, cols)`` pairs.
    """
    counts = np.asarray(counts)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    mapping = {int(r): int(c) for r, c in zip(rows, cols)}
    return mapping, int(counts[rows, cols].sum())


def accuracy(pred, truth):
    """Fraction of samples matched under the best cluster-to-class mapping."""
    pred, truth = _pair(pred, truth)
    if pred.size == 0:
        raise Empty("cannot score empty label vectors")
    _, total = best_mapping(contingency(pred, truth))
    return total / pred.size


def nmi(pred, truth, log=np.log):
    """Mutual information normalised by the mean of the two entropies.

    Both partitions constant gives 1.0; exactly one constant gives 0.0.
    """
    pred, truth = _pair(pred, truth)
    n = pred.size
    if n == 0:
        raise Empty("cannot score empty label vectors")
    C = contingency(pred, truth).astype(np.float64)
    pab = C / n
    pa = pab.sum(axis=1)
    pb = pab.sum(axis=0)
    ha = -(pa[pa > 0] * log(pa[pa > 0])).sum()
    hb = -(pb[pb > 0] * log(pb[pb > 0])).sum()
    if ha + hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = pab > 0
    outer = np.outer(pa, pb)
    mi = (pab[nz] * log(pab[nz] / outer[nz])).sum()
    return float(min(max(mi / (0.5 * (ha + hb)), 0.0), 1.0))
