"""Dense numerical primitives shared by the structuration and fusion stages."""

from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc

from ._backend import kernels
from .exceptions import BadCount, NotSquare


class SpectralEmbedding(NamedTuple):
    """``c`` smallest eigenpairs of a symmetric matrix.

    ``vectors`` is ``n x c`` with orthonormal columns, ``values`` ascending.
    """

    vectors: np.ndarray
    values: np.ndarray


def _square(M):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")
    return M


def laplacian(M):
    """Unnormalised Laplacian ``diag(M_sym 1) - M_sym`` of ``M_sym = (M + M.T)/2``."""
    M = _square(M)
    W = 0.5 * (M + M.T)
    L = -W
    L[np.diag_indices_from(L)] += W.sum(axis=1)
    return L


def eigh_ascending(L):
    """Full symmetric eigendecomposition, eigenvalues ascending."""
    L = _square(L)
    vals, vecs = np.linalg.eigh(0.5 * (L + L.T))
    return vals, vecs


def smallest_eigvecs(L, c):
    """Eigenvectors of the ``c`` smallest eigenvalues of symmetric ``L``."""
    L = _square(L)
    if not 1 <= c <= L.shape[0]:
        raise BadCount(f"need 1 <= c <= n, got c={c}, n={L.shape[0]}")
    vals, vecs = eigh_ascending(L)
    return SpectralEmbedding(vecs[:, :c].copy(), vals[:c].copy())


def pairwise_sqdist(F):
    """Squared Euclidean distances between the rows of ``F``."""
    F = np.asarray(F, dtype=np.float64)
    if F.ndim == 1:
        F = F[:, None]
    return kernels.pairwise_sqdist(F)


def connected_components(M, eps=1e-8):
    """Components of the graph with an edge wherever ``M_sym[a, b] > eps``.

    Returns ``(count, labels)``; component ids are numbered in order of their
    smallest member index.
    """
    M = _square(M)
    A = 0.5 * (M + M.T) > eps
    np.fill_diagonal(A, False)
    count, raw = _cc(A, directed=False)
    # renumber by first appearance so ids follow the smallest node index
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    remap = np.empty(count, dtype=np.int64)
    remap[order] = np.arange(count)
    return int(count), remap[raw]
