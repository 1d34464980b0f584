# cython: language_level=3
"""Compiled solver kernels: batched elimination-cost and harmonic sums.

Term ordering matches shepwm._kernels_py so the two backends differ only by
the rounding of the platform cosine.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, fabs

cnp.import_array()


def harmonic_sums(thetas, signs, orders):
    """sum_i signs[i]*cos(orders[q]*thetas[p, i]) for every row p and order q."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] th = np.ascontiguousarray(
        np.atleast_2d(np.asarray(thetas, dtype=np.float64)))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ascontiguousarray(
        np.asarray(signs, dtype=np.float64))
    cdef cnp.ndarray[cnp.int64_t, ndim=1] od = np.ascontiguousarray(
        np.asarray(orders, dtype=np.int64))
    cdef Py_ssize_t p = th.shape[0], k = th.shape[1], m = od.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((p, m))
    cdef Py_ssize_t ip, i, q
    cdef double acc, n
    for ip in range(p):
        for q in range(m):
            n = <double> od[q]
            acc = 0.0
            for i in range(k):
                acc += sg[i] * cos(n * th[ip, i])
            out[ip, q] = acc
    return out


def she_cost_batch(thetas, signs, orders, double target_m, double weight_fund,
                   double weight_harm, int cells):
    """Sort-repaired elimination cost for a batch of raw angle vectors.

    Same contract as the fallback: per-unit harmonics, fundamental tracking
    term plus 1/n-weighted elimination terms.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] th = np.ascontiguousarray(
        np.atleast_2d(np.asarray(thetas, dtype=np.float64)))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ascontiguousarray(
        np.asarray(signs, dtype=np.float64))
    cdef cnp.ndarray[cnp.int64_t, ndim=1] od = np.ascontiguousarray(
        np.asarray(orders, dtype=np.int64))
    cdef Py_ssize_t p = th.shape[0], k = th.shape[1], m = od.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(p)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(k)
    cdef double scale = 4.0 / (M_PI * cells)
    cdef Py_ssize_t ip, i, j, q
    cdef double acc, key, n, c
    for ip in range(p):
        for i in range(k):
            buf[i] = th[ip, i]
        # insertion sort: K is small (typically 6 or 8)
        for i in range(1, k):
            key = buf[i]
            j = i - 1
            while j >= 0 and buf[j] > key:
                buf[j + 1] = buf[j]
                j -= 1
            buf[j + 1] = key
        acc = 0.0
        for i in range(k):
            acc += sg[i] * cos(buf[i])
        c = weight_fund * fabs(target_m - fabs(scale * acc))
        for q in range(m):
            n = <double> od[q]
            acc = 0.0
            for i in range(k):
                acc += sg[i] * cos(n * buf[i])
            c += (weight_harm / n) * fabs(scale / n * acc)
        out[ip] = c
    return out
