# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. See ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()


def affine_projection(B):
    cdef double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t n = b.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] r = np.zeros(n, dtype=np.float64)
    with nogil:
        _affine(b, o, r, n, 0)
    return out


cdef double _affine(double[:, ::1] m, double[:, ::1] out, double[::1] r,
                    Py_ssize_t n, bint clamp) nogil:
    # writes the affine projection (optionally followed by max(0, .)) of m
    # into out; returns the squared Frobenius distance between out and m
    cdef Py_ssize_t i, j
    cdef double total = 0.0, a, v, d, change = 0.0
    for i in range(n):
        r[i] = 0.0
    for i in range(n):
        for j in range(n):
            v = 0.5 * m[i, j]
            r[i] += v
            r[j] += v
    for i in range(n):
        total += r[i]
    a = (n + total) / (<double>n * n)
    for i in range(n):
        for j in range(n):
            v = 0.5 * (m[i, j] + m[j, i]) + a - (r[i] + r[j]) / n
            if clamp and v < 0.0:
                v = 0.0
            d = v - m[i, j]
            change += d * d
            out[i, j] = v
    return change


def von_neumann(B, Py_ssize_t max_iter, double tol):
    cdef Py_ssize_t n = B.shape[0]
    bufs = [np.array(B, dtype=np.float64, order="C", copy=True),
            np.empty((n, n), dtype=np.float64)]
    cdef double[:, ::1] cur = bufs[0]
    cdef double[:, ::1] nxt = bufs[1]
    cdef double[:, ::1] tmp
    cdef double[::1] r = np.zeros(n, dtype=np.float64)
    cdef double change = INFINITY
    cdef Py_ssize_t it = 0
    cdef int which = 0
    with nogil:
        while it < max_iter:
            it += 1
            change = sqrt(_affine(cur, nxt, r, n, 1))
            tmp = cur
            cur = nxt
            nxt = tmp
            which = 1 - which
            if change < tol:
                break
    return bufs[which], it, change


def pairwise_sqdist(F):
    cdef double[:, ::1] f = np.ascontiguousarray(F, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0], k = f.shape[1], i, j, t
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double s, d
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                s = 0.0
                for t in range(k):
                    d = f[i, t] - f[j, t]
                    s += d * d
                o[i, j] = s
                o[j, i] = s
    return out


def nearest_centroid(X, C):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] c = np.ascontiguousarray(C, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], k = c.shape[0], dim = x.shape[1]
    cdef Py_ssize_t i, j, t, best
    labels = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] lab = labels
    cdef double[::1] dd = dist
    cdef double s, d, bestd
    with nogil:
        for i in range(n):
            best = 0
            bestd = INFINITY
            for j in range(k):
                s = 0.0
                for t in range(dim):
                    d = x[i, t] - c[j, t]
                    s += d * d
                if s < bestd:
                    bestd = s
                    best = j
            lab[i] = best
            dd[i] = bestd
    return labels, dist
