"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``HOCLE_PURE_PYTHON=1`` is set. Signatures and semantics match the Cython
module exactly; results agree to rounding.
"""

import numpy as np


def affine_projection(B):
    n = B.shape[0]
    K = 0.5 * (B + B.T)
    r = K.sum(axis=1)
    total = r.sum()
    return K + (n + total) / n**2 - r[:, None] / n - r[None, :] / n


def von_neumann(B, max_iter, tol):
    """Alternate the affine and nonnegative projections starting from ``B``.

    Returns ``(M, n_iter, last_change)`` where ``M`` is the last nonnegative
    iterate and ``last_change`` the Frobenius norm of its last update.
    """
    M = np.array(B, dtype=np.float64, copy=True)
    change = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        N = np.maximum(affine_projection(M), 0.0)
        change = float(np.sqrt(np.sum((N - M) ** 2)))
        M = N
        if change < tol:
            break
    return M, it, change


def pairwise_sqdist(F):
    F = np.asarray(F, dtype=np.float64)
    sq = np.einsum("ij,ij->i", F, F)
    D = sq[:, None] + sq[None, :] - 2.0 * (F @ F.T)
    D = 0.5 * (D + D.T)
    np.fill_diagonal(D, 0.0)
    np.maximum(D, 0.0, out=D)
    return D


def nearest_centroid(X, C):
    """Label each row of ``X`` with its closest centroid (first index on ties).

    Returns ``(labels, sqdist)`` with the squared distance to the chosen
    centroid.
    """
    d = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d, axis=1)
    return labels.astype(np.int64), d[np.arange(X.shape[0]), labels]
