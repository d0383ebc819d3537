# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Semantics and floating-point operation order must match _pysampling.py
exactly; see that module for the documented contract.
"""

from libc.stdlib cimport free, malloc, qsort

import numpy as np


cdef struct CountIdx:
    long long count
    Py_ssize_t idx


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef const CountIdx* x = <const CountIdx*> a
    cdef const CountIdx* y = <const CountIdx*> b
    if x.count > y.count:
        return -1
    if x.count < y.count:
        return 1
    if x.idx < y.idx:
        return -1
    if x.idx > y.idx:
        return 1
    return 0


def truncated_probs(counts, double add_k, long long top_k, double top_p):
    cdef long long[:] cv = np.ascontiguousarray(counts, dtype=np.int64)
    cdef Py_ssize_t n = cv.shape[0]
    cdef Py_ssize_t i, m = 0, w = 0, cap, kept = 0
    cdef double denom = 0.0, mass = 0.0, p
    cdef CountIdx* order

    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[:] out = out_arr
    for i in range(n):
        if cv[i] >= 0:
            denom += cv[i] + add_k
            m += 1
    if denom <= 0.0 or m == 0:
        return out_arr

    order = <CountIdx*> malloc(m * sizeof(CountIdx))
    if order == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            if cv[i] >= 0:
                order[w].count = cv[i]
                order[w].idx = i
                w += 1
        qsort(order, m, sizeof(CountIdx), _cmp_desc)
        cap = m
        if top_k > 0 and top_k < m:
            cap = top_k
        for i in range(cap):
            p = (order[i].count + add_k) / denom
            if p <= 0.0:
                break
            kept += 1
            mass += p
            if mass >= top_p:
                break
        if mass <= 0.0:
            return out_arr
        for i in range(kept):
            out[order[i].idx] = ((order[i].count + add_k) / denom) / mass
    finally:
        free(order)
    return out_arr


def sample_index(probs, double u):
    cdef double[:] pv = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t n = pv.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t last = -1
    cdef Py_ssize_t i
    for i in range(n):
        if pv[i] > 0.0:
            acc += pv[i]
            last = i
            if u < acc:
                return i
    return last
