"""Fusing the per-order structured matrices into one consensus matrix."""

from dataclasses import dataclass

import numpy as np

from .base_clustering import kmeans
from .exceptions import DimensionMismatch, EmptyInput, SizeMismatch
from .linalg import connected_components
from .structuration import (StructurationParams, StructureResult,
                            project_doubly_stochastic, rank_constrained_fit)


def project_simplex(v):
    """Euclidean projection of ``v`` onto the probability simplex (sort based)."""
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - css / idx > 0)[-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def qp_objective(P, q, w):
    return float(w @ P @ w - 2.0 * w @ q)


def solve_simplex_qp(P, q, max_iter=10000, tol=1e-12):
    """Minimise ``w^T P w - 2 w^T q`` over the probability simplex.

    Accelerated projected gradient from the barycentre: step
    ``1 / (||P||_2 + eps)`` on the half-gradient ``P w - q`` with Nesterov
    momentum, restarted whenever the objective goes up. Stops when both the
    objective change and the iterate change are negligible.
    """
    P = np.asarray(P, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    d = q.size
    if P.shape != (d, d):
        raise DimensionMismatch(f"P has shape {P.shape}, q has length {d}")
    if d == 1:
        return np.ones(1)
    step = 1.0 / (np.linalg.norm(P, 2) + 1e-12)
    w = np.full(d, 1.0 / d)
    y = w
    t = 1.0
    f = qp_objective(P, q, w)
    for _ in range(max_iter):
        w_new = project_simplex(y - step * (P @ y - q))
        f_new = qp_objective(P, q, w_new)
        if f_new > f:
            if t == 1.0:
                break  # plain step cannot descend: rounding floor reached
            # momentum overshoot: restart from the last accepted iterate
            y, t = w, 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = w_new + ((t - 1.0) / t_new) * (w_new - w)
        stalled = f - f_new < tol
        w, t, f = w_new, t_new, f_new
        if stalled:
            # momentum can stall against a vertex; only stop if a plain
            # projected step from w cannot improve either
            plain = project_simplex(w - step * (P @ w - q))
            f_plain = qp_objective(P, q, plain)
            if f - f_plain < tol:
                if f_plain < f:
                    w = plain
                break
            y, t = w, 1.0
    return w


def gram(M_list):
    d = len(M_list)
    P = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            P[i, j] = P[j, i] = np.vdot(M_list[i], M_list[j])
    return P


@dataclass
class FusionResult(StructureResult):
    weights: np.ndarray = None

    def __iter__(self):
        return iter((self.matrix, self.embedding, self.weights))


def fuse_consensus(M_list, c, params=None):
    """Weighted rank-constrained fusion of structured matrices.

    Alternates simplex-constrained weights (a small QP on the Gram matrix of
    the inputs), a doubly stochastic M-step towards ``sum_i w_i M_i`` minus
    the spectral distance penalty, and the spectral embedding update.

    Returns a :class:`FusionResult`, which unpacks as ``(M, F, w)``.
    """
    params = params or StructurationParams()
    M_list = [np.asarray(M, dtype=np.float64) for M in M_list]
    if not M_list:
        raise EmptyInput("no matrices to fuse")
    shape = M_list[0].shape
    if any(M.shape != shape for M in M_list) or shape[0] != shape[1]:
        raise SizeMismatch("all inputs must be square and of equal size")

    d = len(M_list)
    P = gram(M_list)
    w = np.full(d, 1.0 / d)

    def combine(weights):
        out = np.zeros(shape)
        for wi, M in zip(weights, M_list):
            out += wi * M
        return out

    M0, info = project_doubly_stochastic(
        combine(w), params.proj_max_iter, params.proj_tol, full_output=True)

    def target(M, F):
        nonlocal w
        q = np.array([np.vdot(Mi, M) for Mi in M_list])
        w = solve_simplex_qp(P, q)
        return combine(w)

    base = rank_constrained_fit(target, M0, c, params)
    res = FusionResult(**vars(base), weights=w)
    res.feasible &= info["converged"]
    return res


def extract_labels(M, F, c, eps=1e-8, seed=0):
    """Read labels off the component structure of ``M``.

    When ``M`` does not have exactly ``c`` components, k-means on the rows of
    the embedding ``F`` is used instead.
    """
    count, comp = connected_components(M, eps)
    if count == c:
        return comp
    F = getattr(F, "vectors", F)
    return kmeans(F, c, seed=seed)
