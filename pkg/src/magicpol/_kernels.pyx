# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sum-over-states kernels.

Must stay operation-for-operation identical to ``_kernels_py`` so both
backends return bit-identical results. Built without -ffast-math and with
FP contraction disabled; either would break the compensated summation.
"""

import numpy as np

from libc.math cimport fabs


def valence_sum(const double[::1] delta_e, const double[::1] d2, const double[::1] omega):
    cdef Py_ssize_t n = omega.shape[0]
    cdef Py_ssize_t m = delta_e.shape[0]
    cdef Py_ssize_t i, k
    cdef double w2, s, c, x, t, de
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(n):
            w2 = omega[i] * omega[i]
            s = 0.0
            c = 0.0
            for k in range(m):
                de = delta_e[k]
                x = (de * d2[k]) / (de * de - w2) / 3.0
                t = s + x
                if fabs(s) >= fabs(x):
                    c += (s - t) + x
                else:
                    c += (x - t) + s
                s = t
            res[i] = s + c
    return out


def running_sum(const double[::1] values):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k
    cdef double s = 0.0, c = 0.0, x, t
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    for k in range(n):
        x = values[k]
        t = s + x
        if fabs(s) >= fabs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        res[k] = s + c
    return out
