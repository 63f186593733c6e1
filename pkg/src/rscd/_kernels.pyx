# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the contracts."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs, INFINITY

cnp.import_array()


def coeff_products(X, masks, double alpha, double g):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef signed char[:, ::1] m = np.ascontiguousarray(masks, dtype=np.int8)
    cdef Py_ssize_t N = x.shape[0], n = x.shape[1], K = m.shape[0]
    values_arr = np.empty((N, K), dtype=np.float64)
    min_den_arr = np.empty((N, K), dtype=np.float64)
    cdef double[:, ::1] values = values_arr
    cdef double[:, ::1] min_den = min_den_arr
    cdef double half = 0.5 * alpha
    cdef Py_ssize_t s, k, j, l
    cdef double num, den, d, lo
    with nogil:
        for s in range(N):
            for k in range(K):
                num = 1.0
                den = 1.0
                lo = INFINITY
                for j in range(n):
                    if m[k, j] == 0:
                        continue
                    for l in range(n):
                        if m[k, l] != 0:
                            continue
                        d = sin(half * (x[s, j] - x[s, l]))
                        num *= sin(half * (x[s, j] - x[s, l] + g))
                        den *= d
                        if fabs(d) < lo:
                            lo = fabs(d)
                values[s, k] = num / den
                min_den[s, k] = lo
    return values_arr, min_den_arr


def grouped_exp_sums(X, W, offsets, double alpha):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] w = np.ascontiguousarray(W, dtype=np.float64)
    cdef Py_ssize_t[::1] off = np.ascontiguousarray(offsets, dtype=np.intp)
    cdef Py_ssize_t N = x.shape[0], n = x.shape[1], G = off.shape[0] - 1
    out_arr = np.empty((N, G), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t s, grp, l, j
    cdef double phase, re, im
    with nogil:
        for s in range(N):
            for grp in range(G):
                re = 0.0
                im = 0.0
                for l in range(off[grp], off[grp + 1]):
                    phase = 0.0
                    for j in range(n):
                        phase = phase + w[l, j] * x[s, j]
                    phase = phase * alpha
                    re = re + cos(phase)
                    im = im + sin(phase)
                out[s, grp] = re + 1j * im
    return out_arr
