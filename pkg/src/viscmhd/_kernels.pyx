# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather/scatter kernel for finite element assembly."""

import numpy as np
cimport numpy as cnp


def scatter_add(double[:, ::1] out, long long[:, ::1] idx,
                double[:, :, ::1] vals):
    """out[idx[c, l], :] += vals[c, l, :] (duplicate indices accumulate)."""
    cdef Py_ssize_t nc = idx.shape[0]
    cdef Py_ssize_t nl = idx.shape[1]
    cdef Py_ssize_t m = out.shape[1]
    cdef Py_ssize_t c, l, j
    cdef long long g
    for c in range(nc):
        for l in range(nl):
            g = idx[c, l]
            for j in range(m):
                out[g, j] += vals[c, l, j]
