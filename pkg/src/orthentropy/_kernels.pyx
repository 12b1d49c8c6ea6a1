# cython: language_level=3
"""Compiled entrywise kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, log1p, expm1, pow, fabs

cnp.import_array()


def row_entropies(const double[:, ::1] O):
    cdef Py_ssize_t n = O.shape[0], m = O.shape[1], i, j
    cdef double u, acc
    out = np.zeros(n)
    cdef double[::1] res = out
    for i in range(n):
        acc = 0.0
        for j in range(m):
            u = O[i, j] * O[i, j]
            if u > 0.0:
                acc -= u * log(u)
        res[i] = acc
    return out


def entropy_gradient(const double[:, ::1] O):
    cdef Py_ssize_t n = O.shape[0], m = O.shape[1], i, j
    cdef double x, u
    out = np.zeros((n, m))
    cdef double[:, ::1] G = out
    for i in range(n):
        for j in range(m):
            x = O[i, j]
            u = x * x
            if u > 0.0:
                G[i, j] = -2.0 * x * (1.0 + log(u))
    return out


def power_sum(const double[:, ::1] O, double a):
    cdef Py_ssize_t n = O.shape[0], m = O.shape[1], i, j
    cdef double u, acc = 0.0
    for i in range(n):
        for j in range(m):
            u = O[i, j] * O[i, j]
            if u > 0.0:
                acc += pow(u, a)
    return acc


def power_gradient(const double[:, ::1] O, double a):
    cdef Py_ssize_t n = O.shape[0], m = O.shape[1], i, j
    cdef double x, u
    out = np.zeros((n, m))
    cdef double[:, ::1] G = out
    for i in range(n):
        for j in range(m):
            x = O[i, j]
            u = x * x
            if u > 0.0:
                G[i, j] = 2.0 * a * x * pow(u, a - 1.0)
    return out


def objective_gain(const double[:, ::1] old, const double[:, ::1] new, double a):
    cdef Py_ssize_t n = old.shape[0], m = old.shape[1], i, j
    cdef double x, y, u, v, dv, acc = 0.0
    cdef bint shannon = a == 1.0
    for i in range(n):
        for j in range(m):
            x = old[i, j]
            y = new[i, j]
            u = x * x
            v = y * y
            dv = (y - x) * (y + x)
            if u > 0.0 and fabs(dv) < 0.5 * u:
                if shannon:
                    acc += dv * log(v) + u * log1p(dv / u)
                else:
                    acc += pow(u, a) * expm1(a * log1p(dv / u))
            else:
                if v > 0.0:
                    acc += v * log(v) if shannon else pow(v, a)
                if u > 0.0:
                    acc -= u * log(u) if shannon else pow(u, a)
    if shannon:
        return -acc
    return acc / (1.0 - a)


def stationarity_residual(const double[:, ::1] O, double a):
    cdef Py_ssize_t n = O.shape[0], i, j, l
    cdef double r, p, wj, wl, uj, ul
    cdef bint shannon = a == 1.0
    out = np.zeros((n, n))
    cdef double[:, ::1] R = out
    for j in range(n):
        for l in range(j + 1, n):
            r = 0.0
            for i in range(n):
                p = O[i, j] * O[i, l]
                if p == 0.0:
                    continue
                uj = O[i, j] * O[i, j]
                ul = O[i, l] * O[i, l]
                if shannon:
                    wj = log(uj)
                    wl = log(ul)
                else:
                    wj = pow(uj, a - 1.0)
                    wl = pow(ul, a - 1.0)
                r += p * (wj - wl)
            R[j, l] = r
            R[l, j] = -r
    return out
