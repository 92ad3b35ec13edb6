# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Callers pre-scale rational data to int64 and guarantee (by a magnitude bound)
that no intermediate value overflows.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def maxplus_eval(const i64[:, ::1] E, const i64[::1] C, const i64[:, ::1] V,
                 const i64[::1] D, i64 q):
    """out[p] = max_t C[t]*D[p] + q*(E[t] . V[p]); requires at least one term."""
    cdef Py_ssize_t T = E.shape[0], n = E.shape[1], P = V.shape[0]
    cdef Py_ssize_t p, t, k
    cdef i64 best, acc
    out = np.empty(P, dtype=np.int64)
    cdef i64[::1] res = out
    for p in range(P):
        best = 0
        for t in range(T):
            acc = 0
            for k in range(n):
                acc += E[t, k] * V[p, k]
            acc = C[t] * D[p] + q * acc
            if t == 0 or acc > best:
                best = acc
        res[p] = best
    return out


def locate_cells(const i64[:, ::1] W, const i64[::1] w, const i64[::1] offsets,
                 const i64[:, ::1] V, const i64[::1] D):
    """Index of the first cell whose rows satisfy W[r].V[p] + w[r]*D[p] >= 0, else -1."""
    cdef Py_ssize_t ncell = offsets.shape[0] - 1, n = V.shape[1], P = V.shape[0]
    cdef Py_ssize_t p, c, r, k
    cdef i64 acc
    cdef bint ok
    out = np.empty(P, dtype=np.int64)
    cdef i64[::1] res = out
    for p in range(P):
        res[p] = -1
        for c in range(ncell):
            ok = True
            for r in range(offsets[c], offsets[c + 1]):
                acc = w[r] * D[p]
                for k in range(n):
                    acc += W[r, k] * V[p, k]
                if acc < 0:
                    ok = False
                    break
            if ok:
                res[p] = c
                break
    return out
