# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pair/triple scans; contracts match _kernels_py exactly."""

import numpy as np

cimport numpy as cnp

BACKEND = "cython"

INF = float("inf")


def min_margin_scan(lhs, rhs, eligible):
    cdef double[:, ::1] L = np.ascontiguousarray(lhs, dtype=np.float64)
    cdef double[:, ::1] R = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef cnp.uint8_t[:, ::1] E = np.ascontiguousarray(eligible, dtype=np.uint8)
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t i, j, wi = -1, wj = -1
    cdef long count = 0
    cdef double best = INF, m
    for i in range(n):
        for j in range(i + 1, n):
            if E[i, j]:
                count += 1
                m = L[i, j] - R[i, j]
                if m < best:
                    best = m
                    wi = i
                    wj = j
    return best, wi, wj, count


def max_ratio_scan(dist, image):
    cdef double[:, ::1] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef long[::1] T = np.ascontiguousarray(image, dtype=np.int64)
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t i, j, wi = -1, wj = -1
    cdef double best = -INF, r
    for i in range(n):
        for j in range(i + 1, n):
            r = D[T[i], T[j]] / D[i, j]
            if r > best:
                best = r
                wi = i
                wj = j
    return best, wi, wj


def triangle_scan(dist, tol):
    cdef double[:, ::1] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t i, j, k, wi = -1, wj = -1, wk = -1
    cdef double worst = INF, s
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = D[i, j] + D[j, k] - D[i, k]
                if s < worst:
                    worst = s
                    wi = i
                    wj = j
                    wk = k
    ok = 1 if worst >= -tol else 0
    return ok, wi, wj, wk, worst
