"""Structured doubly stochastic consensus matrices.

Given a fused similarity ``S``, :func:`structure` solves

    min_{M, F}  ||M - S||_F^2 + 2 lam Tr(F^T L_M F)
    s.t. M >= 0, M = M^T, M 1 = 1, F^T F = I

by alternating an M-step (projection of ``S - (lam/2) D_F`` onto the doubly
stochastic set, ``D_F`` the squared distances between rows of ``F``) with an
F-step (the ``c`` smallest Laplacian eigenvectors). ``lam`` is doubled or
halved until the Laplacian has exactly ``c`` near-zero eigenvalues.
"""

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .exceptions import BadCount
from .linalg import (SpectralEmbedding, _square, eigh_ascending, laplacian,
                     pairwise_sqdist)

LAMBDA_MIN = 1e-6
LAMBDA_MAX = 1e6
#: feasibility violation above which a projection is reported as unconverged
VIOLATION_LIMIT = 1e-4


@dataclass
class StructurationParams:
    lambda0: float = 0.1
    outer_max_iter: int = 30
    proj_max_iter: int = 1000
    tol: float = 1e-6
    eig_eps: float = 1e-8
    #: stopping tolerance of the alternating projection (also the clamp width)
    proj_tol: float = 1e-9


@dataclass
class StructureResult:
    matrix: np.ndarray
    embedding: SpectralEmbedding
    n_iter: int = 0
    converged: bool = False
    #: every inner projection met the feasibility limit
    feasible: bool = True
    lambda_trace: list = field(default_factory=list)
    components_trace: list = field(default_factory=list)

    def __iter__(self):
        # allows ``M, F = structure(...)``
        return iter((self.matrix, self.embedding))


def project_affine(B):
    """Euclidean projection onto ``{M : M = M^T, M 1 = 1}`` (closed form)."""
    B = _square(B)
    return kernels.affine_projection(B)


def project_nonneg(B):
    return np.maximum(np.asarray(B, dtype=np.float64), 0.0)


def constraint_violation(M):
    """Largest violation among symmetry, nonnegativity and unit row sums."""
    return max(float(np.abs(M - M.T).max()),
               float(max(0.0, -M.min())),
               float(np.abs(M.sum(axis=1) - 1.0).max()))


def project_doubly_stochastic(B, max_iter=1000, tol=1e-9, full_output=False):
    """Alternating (von Neumann) projections onto the doubly stochastic set.

    Iterates the affine and nonnegative projections from ``B`` until the
    Frobenius change of an iterate drops below ``tol``. A final affine step
    restores exact row sums; entries in ``[-tol, 0)`` are then clamped to zero
    and the result symmetrised.

    The limit is a feasible point, not in general the nearest one.

    Returns
    -------
    M : ndarray
    info : dict
        Only if ``full_output``: ``n_iter``, ``change``, ``violation`` and
        ``converged`` (violation at most 1e-4).
    """
    B = _square(B)
    M, n_iter, change = kernels.von_neumann(B, int(max_iter), float(tol))
    M = kernels.affine_projection(M)
    M[(M < 0.0) & (M >= -tol)] = 0.0
    M = 0.5 * (M + M.T)
    if not full_output:
        return M
    violation = constraint_violation(M)
    return M, {"n_iter": int(n_iter), "change": float(change),
               "violation": violation,
               "converged": violation <= VIOLATION_LIMIT}


def count_zero_eigenvalues(eigenvalues, eig_eps):
    return int(np.count_nonzero(np.asarray(eigenvalues) < eig_eps))


def adapt_lambda(eigenvalues, c, lam, eig_eps=1e-8):
    """Double ``lam`` with too few components, halve it with too many."""
    z = count_zero_eigenvalues(eigenvalues, eig_eps)
    if z < c:
        lam = 2.0 * lam
    elif z > c:
        lam = 0.5 * lam
    return float(min(max(lam, LAMBDA_MIN), LAMBDA_MAX))


def penalised_target(target, F, lam):
    """M-step target ``target - (lam/2) D_F``.

    Completing the square, ``||M - T||^2 + lam <M, D_F>`` equals
    ``||M - (T - lam D_F / 2)||^2`` up to a term free of ``M``.
    """
    return target - 0.5 * lam * pairwise_sqdist(getattr(F, "vectors", F))


def rank_constrained_fit(target_fn, M0, c, params):
    """Shared M/F alternation behind :func:`structure` and consensus fusion.

    ``target_fn(M, F)`` returns the unconstrained M-step target *before* the
    distance penalty is subtracted; it may update auxiliary state (fusion
    weights) from the current iterate.
    """
    n = M0.shape[0]
    if not 1 <= c < n:
        raise BadCount(f"need 1 <= c < n, got c={c}, n={n}")
    vals, vecs = eigh_ascending(laplacian(M0))
    F = vecs[:, :c]
    M = M0
    lam = float(params.lambda0)
    res = StructureResult(M, SpectralEmbedding(F.copy(), vals[:c].copy()))
    res.lambda_trace.append(lam)
    res.components_trace.append(count_zero_eigenvalues(vals, params.eig_eps))

    for it in range(1, params.outer_max_iter + 1):
        B = penalised_target(target_fn(M, F), F, lam)
        M_new, info = project_doubly_stochastic(
            B, params.proj_max_iter, params.proj_tol, full_output=True)
        res.feasible &= info["converged"]
        vals, vecs = eigh_ascending(laplacian(M_new))
        F = vecs[:, :c]
        lam = adapt_lambda(vals, c, lam, params.eig_eps)
        res.lambda_trace.append(lam)
        res.components_trace.append(
            count_zero_eigenvalues(vals, params.eig_eps))
        delta = np.linalg.norm(M_new - M)
        M = M_new
        res.n_iter = it
        if delta < params.tol:
            res.converged = True
            break

    res.matrix = M
    res.embedding = SpectralEmbedding(F.copy(), vals[:c].copy())
    return res


def structure(s_hat, c, params=None):
    """Structured doubly stochastic approximation of ``s_hat`` with ``c`` blocks.

    Returns a :class:`StructureResult`; it unpacks as ``(M, F)``.
    """
    params = params or StructurationParams()
    s_hat = _square(s_hat)
    M0, info = project_doubly_stochastic(
        s_hat, params.proj_max_iter, params.proj_tol, full_output=True)
    res = rank_constrained_fit(lambda M, F: s_hat, M0, c, params)
    res.feasible &= info["converged"]
    return res
