# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: per-segment polynomial detrending and in-place swaps.

Both functions mirror ``_fallback`` exactly in signature and semantics.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def segment_variances(const double[::1] profile, Py_ssize_t n,
                      const double[:, ::1] basis, bint dual_pass):
    cdef Py_ssize_t size = profile.shape[0]
    cdef Py_ssize_t n_seg = size // n
    cdef Py_ssize_t n_basis = basis.shape[1]
    cdef Py_ssize_t total = 2 * n_seg if dual_pass else n_seg
    cdef Py_ssize_t v, k, j, start
    cdef double mean, c, r, acc
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    seg_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] seg = seg_arr
    coef_arr = np.empty(n_basis, dtype=np.float64)
    cdef double[::1] coef = coef_arr

    for v in range(total):
        if v < n_seg:
            start = v * n
        else:
            start = size - (v - n_seg + 1) * n
        mean = 0.0
        for k in range(n):
            mean += profile[start + k]
        mean /= n
        for k in range(n):
            seg[k] = profile[start + k] - mean
        for j in range(n_basis):
            c = 0.0
            for k in range(n):
                c += basis[k, j] * seg[k]
            coef[j] = c
        acc = 0.0
        for k in range(n):
            r = seg[k]
            for j in range(n_basis):
                r -= coef[j] * basis[k, j]
            acc += r * r
        out[v] = acc / n
    return out_arr


def apply_transpositions(double[::1] values, const cnp.int64_t[::1] first,
                         const cnp.int64_t[::1] second):
    cdef Py_ssize_t t, i, j
    cdef double tmp
    for t in range(first.shape[0]):
        i = first[t]
        j = second[t]
        tmp = values[i]
        values[i] = values[j]
        values[j] = tmp
