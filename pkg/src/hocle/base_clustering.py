"""Seeded K-Means base clusterings and their co-association matrices."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._backend import kernels
from .exceptions import BadClusterCount, LabelOutOfRange


def kmeans(X, c, seed=0, max_iter=100, tol=1e-4, return_trace=False):
    """Lloyd's algorithm with uniform distinct-sample initialisation.

    Parameters
    ----------
    X : ndarray of shape (n, d)
    c : int
        Number of clusters, ``1 <= c <= n``.
    seed : int
        Seed for :func:`numpy.random.default_rng`; fixes the initial centroids.
    max_iter : int
    tol : float
        Stop once no centroid moves more than ``tol`` (Euclidean).
    return_trace : bool
        Also return the within-cluster sum of squares after each iteration.

    Returns
    -------
    labels : ndarray of int64, values in ``[0, c)``
    trace : list of float
        Only when ``return_trace`` is true.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= c <= n:
        raise BadClusterCount(f"need 1 <= c <= n, got c={c}, n={n}")

    rng = np.random.default_rng(seed)
    centroids = X[np.sort(rng.choice(n, size=c, replace=False))].copy()
    trace = []
    labels = np.zeros(n, dtype=np.int64)

    for _ in range(max_iter):
        labels, dist = kernels.nearest_centroid(X, centroids)
        counts = np.bincount(labels, minlength=c)
        # empty clusters take the point currently farthest from its centroid
        for k in np.flatnonzero(counts == 0):
            movable = counts[labels] > 1
            far = int(np.argmax(np.where(movable, dist, -1.0)))
            counts[labels[far]] -= 1
            labels[far] = k
            counts[k] = 1
            dist[far] = 0.0

        new = np.zeros_like(centroids)
        np.add.at(new, labels, X)
        new /= counts[:, None]
        shift = np.sqrt(((new - centroids) ** 2).sum(axis=1)).max()
        centroids = new
        if return_trace:
            trace.append(float(((X - centroids[labels]) ** 2).sum()))
        if shift <= tol:
            break

    if return_trace:
        return labels, trace
    return labels


def indicator(labels, c):
    """One-hot ``n x c`` indicator matrix of a label vector."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= c):
        raise LabelOutOfRange(f"labels must lie in [0, {c})")
    H = np.zeros((labels.size, c), dtype=np.float64)
    H[np.arange(labels.size), labels] = 1.0
    return H


def coassociation(H):
    """Binary co-association matrix ``H @ H.T``."""
    H = np.asarray(H, dtype=np.float64)
    return H @ H.T


def generate_ensemble(X, c, m=20, seed=0, max_iter=100, tol=1e-4,
                      n_jobs=1, return_labels=False):
    """Run ``m`` K-Means members (member ``i`` seeded ``seed + i``).

    Returns the list of co-association matrices in member order, and the
    member label vectors when ``return_labels`` is set.
    """
    if m < 1:
        raise BadClusterCount(f"ensemble size must be >= 1, got {m}")

    def member(i):
        return kmeans(X, c, seed=seed + i, max_iter=max_iter, tol=tol)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            labels = list(pool.map(member, range(m)))
    else:
        labels = [member(i) for i in range(m)]
    S = [coassociation(indicator(lab, c)) for lab in labels]
    if return_labels:
        return S, labels
    return S
