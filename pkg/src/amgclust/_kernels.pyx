# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR kernels: Gauss-Seidel sweeps and greedy edge matching.

These loops are inherently sequential (each update feeds the next), which
is why they live in a compiled extension. `_kernels_py` provides the
drop-in fallback; `kernels` picks one at import time.
"""

import numpy as np

cimport numpy as cnp

BACKEND = "cython"


def gauss_seidel(const cnp.int64_t[::1] indptr,
                 const cnp.int64_t[::1] indices,
                 const double[::1] data,
                 const double[::1] diag,
                 double[::1] x,
                 const double[::1] b,
                 Py_ssize_t row_start,
                 Py_ssize_t row_stop,
                 Py_ssize_t row_step):
    """In-place Gauss-Seidel sweep over rows [row_start, row_stop) by row_step.

    The row sum includes the diagonal term, so the update is
    x[i] += (b[i] - A[i, :] @ x) / diag[i].
    """
    cdef Py_ssize_t i, jj
    cdef double rsum
    with nogil:
        i = row_start
        while i != row_stop:
            rsum = 0.0
            for jj in range(indptr[i], indptr[i + 1]):
                rsum += data[jj] * x[indices[jj]]
            x[i] += (b[i] - rsum) / diag[i]
            i += row_step


def greedy_match(const cnp.int64_t[::1] order,
                 const cnp.int64_t[::1] ei,
                 const cnp.int64_t[::1] ej,
                 cnp.int64_t[::1] match):
    """Greedy maximal matching over edges visited in `order`.

    `match` must come in filled with -1; matched pairs point at each other
    on exit. Returns the number of pairs formed.
    """
    cdef Py_ssize_t t, e
    cdef cnp.int64_t i, j
    cdef Py_ssize_t npairs = 0
    with nogil:
        for t in range(order.shape[0]):
            e = order[t]
            i = ei[e]
            j = ej[e]
            if match[i] == -1 and match[j] == -1:
                match[i] = j
                match[j] = i
                npairs += 1
    return npairs
