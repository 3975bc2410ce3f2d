"""Weighted fusion of a high-order family into one similarity target.

Maximises ``sum_i w_i <A_i, S>`` subject to unit-L2 rows of ``S >= 0`` and
``||w||_2 = 1, w >= 0`` by exact block coordinate ascent: both half-steps
have closed forms (row normalisation of the weighted sum, and normalisation
of the inner-product vector).
"""

import numpy as np

from .exceptions import EmptyFamily, SizeMismatch
from .high_order import ORDER_M

_TINY = 1e-12


def _matrices(family):
    mats = family.matrices if hasattr(family, "matrices") else family
    return [np.asarray(a, dtype=np.float64) for a in mats]


def _inner(A, S):
    return np.array([np.vdot(a, S) for a in A])


def update_s_hat(family, w):
    """Row-normalised weighted sum ``sum_i w_i A_i``.

    Rows whose norm falls below 1e-12 are replaced by the unit vector that
    selects the diagonal entry.
    """
    A = _matrices(family)
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (len(A),):
        raise SizeMismatch(f"{w.size} weights for {len(A)} matrices")
    D = np.zeros_like(A[0])
    for wi, a in zip(w, A):
        D += wi * a
    norms = np.sqrt((D * D).sum(axis=1))
    bad = norms < _TINY
    norms[bad] = 1.0
    S = D / norms[:, None]
    if bad.any():
        idx = np.flatnonzero(bad)
        S[idx] = 0.0
        S[idx, idx] = 1.0
    return S


def update_weights(family, s_hat):
    """Unit-norm weights proportional to ``<A_i, s_hat>``."""
    A = _matrices(family)
    s_hat = np.asarray(s_hat, dtype=np.float64)
    if any(a.shape != s_hat.shape for a in A):
        raise SizeMismatch(f"matrices {A[0].shape} vs target {s_hat.shape}")
    b = _inner(A, s_hat)
    norm = np.sqrt(b @ b)
    if norm < _TINY:
        return np.full(len(A), 1.0 / np.sqrt(len(A)))
    return b / norm


def objective(family, s_hat, w):
    """Fused objective ``sum_i w_i <A_i, s_hat>``."""
    return float(w @ _inner(_matrices(family), s_hat))


def fuse_weighted(family, max_iter=50, tol=1e-6, return_trace=False):
    """Alternate :func:`update_s_hat` and :func:`update_weights`.

    Parameters
    ----------
    family : HighOrderFamily or sequence of ndarray
    max_iter : int
    tol : float
        Stop when the Frobenius change of the target drops below ``tol``.
    return_trace : bool
        Also return a dict with the objective after every iteration
        (``"objective"``), ``"n_iter"`` and ``"converged"``.

    Returns
    -------
    s_hat : ndarray (n, n)
    w : ndarray (k,)
    info : dict, optional
    """
    A = _matrices(family)
    if not A:
        raise EmptyFamily("cannot fuse an empty family")
    k = len(A)
    order = getattr(family, "order", None)

    if k == 1 or order == ORDER_M:
        s_hat = update_s_hat(A, np.ones(k) / np.sqrt(k))
        w = np.ones(k) / np.sqrt(k)
        info = {"objective": [objective(A, s_hat, w)], "n_iter": 1,
                "converged": True}
        return (s_hat, w, info) if return_trace else (s_hat, w)

    w = np.full(k, 1.0 / np.sqrt(k))
    s_hat = None
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        s_new = update_s_hat(A, w)
        w = update_weights(A, s_new)
        trace.append(objective(A, s_new, w))
        delta = np.inf if s_hat is None else np.linalg.norm(s_new - s_hat)
        s_hat = s_new
        if delta < tol:
            converged = True
            break

    if return_trace:
        return s_hat, w, {"objective": trace, "n_iter": it,
                          "converged": converged}
    return s_hat, w
