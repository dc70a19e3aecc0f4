# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; semantics mirror ``_pykernels`` exactly."""

import numpy as np
from libc.stdint cimport uint64_t, int64_t, int32_t, int8_t
from libc.stdlib cimport malloc, free


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _next(uint64_t* state) nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    return _mix64(state[0])


cdef inline int _delta(const int32_t[:, ::1] a, Py_ssize_t i,
                       const int32_t[:, ::1] b, Py_ssize_t j, Py_ssize_t n) nogil:
    cdef int d = 0
    cdef Py_ssize_t u
    cdef int32_t x, y
    for u in range(n):
        x = a[i, u]
        y = b[j, u]
        if x < y:
            d += 1
        elif x > y:
            d -= 1
    return d


def tally(a, b):
    cdef const int32_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int32_t[:, ::1] B = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], n = A.shape[1]
    wins_arr = np.zeros(na, dtype=np.int64)
    ties_arr = np.zeros(na, dtype=np.int64)
    losses_arr = np.zeros(na, dtype=np.int64)
    margin_arr = np.zeros(na, dtype=np.int64)
    cdef int64_t[::1] wins = wins_arr
    cdef int64_t[::1] ties = ties_arr
    cdef int64_t[::1] losses = losses_arr
    cdef int64_t[::1] margin = margin_arr
    cdef Py_ssize_t i, j
    cdef int d
    cdef int64_t w, t, l, s
    if na == 0 or nb == 0:
        return wins_arr, ties_arr, losses_arr, margin_arr
    with nogil:
        for i in range(na):
            w = 0
            t = 0
            l = 0
            s = 0
            for j in range(nb):
                d = _delta(A, i, B, j, n)
                s += d
                if d > 0:
                    w += 1
                elif d == 0:
                    t += 1
                else:
                    l += 1
            wins[i] = w
            ties[i] = t
            losses[i] = l
            margin[i] = s
    return wins_arr, ties_arr, losses_arr, margin_arr


def sign_matrix(a, b):
    cdef const int32_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int32_t[:, ::1] B = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], n = A.shape[1]
    out_arr = np.zeros((na, nb), dtype=np.int8)
    cdef int8_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef int d
    if na == 0 or nb == 0:
        return out_arr
    with nogil:
        for i in range(na):
            for j in range(nb):
                d = _delta(A, i, B, j, n)
                out[i, j] = 1 if d > 0 else (-1 if d < 0 else 0)
    return out_arr


def run_chains(eu, ev, Py_ssize_t n, Py_ssize_t steps, lazy_threshold, seed,
               Py_ssize_t first_index, Py_ssize_t count):
    cdef const int32_t[::1] EU = np.ascontiguousarray(eu, dtype=np.int32)
    cdef const int32_t[::1] EV = np.ascontiguousarray(ev, dtype=np.int32)
    cdef Py_ssize_t m = EU.shape[0]
    out_arr = np.full((count, n), -1, dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    cdef uint64_t thr = <uint64_t>lazy_threshold
    cdef uint64_t s0 = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t state
    cdef uint64_t mm = <uint64_t>m
    cdef Py_ssize_t r, step, k, x
    cdef int32_t u, v, pu, pv
    cdef int32_t* p
    if m == 0 or count == 0 or n == 0:
        return out_arr
    if m >= (1 << 32):
        raise ValueError("too many edges")
    p = <int32_t*>malloc(n * sizeof(int32_t))
    if p == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(count):
                for x in range(n):
                    p[x] = -1
                state = _mix64(s0 + _mix64(<uint64_t>(first_index + r + 1)))
                for step in range(steps):
                    if _next(&state) < thr:
                        continue
                    k = <Py_ssize_t>(((_next(&state) >> 32) * mm) >> 32)
                    u = EU[k]
                    v = EV[k]
                    pu = p[u]
                    pv = p[v]
                    if pu == v:
                        p[u] = -1
                        p[v] = -1
                    elif pu == -1 and pv == -1:
                        p[u] = v
                        p[v] = u
                    elif pu == -1:
                        p[pv] = -1
                        p[v] = u
                        p[u] = v
                    elif pv == -1:
                        p[pu] = -1
                        p[u] = v
                        p[v] = u
                for x in range(n):
                    out[r, x] = p[x]
    finally:
        free(p)
    return out_arr
