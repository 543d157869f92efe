# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see _pykernels for the contracts."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, pow

cnp.import_array()


def hermite_table(const double[::1] x, int M):
    cdef Py_ssize_t n = x.shape[0], i
    cdef int j
    out_arr = np.empty((n, M + 1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double xi
    for i in range(n):
        xi = x[i]
        out[i, 0] = 1.0
        if M >= 1:
            out[i, 1] = xi
        for j in range(1, M):
            out[i, j + 1] = xi * out[i, j] - j * out[i, j - 1]
    return out_arr


def count_exceedances(const double[::1] y, const double[::1] thresholds):
    cdef Py_ssize_t n = y.shape[0], m = thresholds.shape[0], i, lo, hi, mid
    hist_arr = np.zeros(m + 1, dtype=np.int64)
    cdef long long[::1] hist = hist_arr
    cdef double v
    for i in range(n):
        v = y[i]
        # count thresholds strictly below v
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) >> 1
            if thresholds[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        hist[lo] += 1
    out_arr = np.empty(m, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long acc = 0
    for i in range(m, 0, -1):
        acc += hist[i]
        out[i - 1] = acc
    return out_arr


def hill_curve(const double[::1] y_desc, Py_ssize_t kmax):
    if y_desc.shape[0] < kmax + 1:
        raise ValueError("need at least kmax + 1 values")
    out_arr = np.empty(kmax, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc = 0.0, cur = log(y_desc[0]), nxt
    cdef Py_ssize_t k
    for k in range(1, kmax + 1):
        acc += cur
        nxt = log(y_desc[k])
        out[k - 1] = acc / k - nxt
        cur = nxt
    return out_arr


def conditional_exceedance_sums(const double[::1] x, double tau, const double[::1] levels,
                                double alpha, double c, double beta, int family, double z0):
    # z = level * exp(-tau x), so z**-a = level**-a * exp(a tau x): the powers of the
    # per-observation factor are computed once instead of once per level
    cdef Py_ssize_t n = x.shape[0], m = levels.shape[0], i, j
    out_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    pw_arr = np.empty(n, dtype=np.float64)
    pw2_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] pw = pw_arr
    cdef double[::1] pw2 = pw2_arr
    cdef double p, acc, L, La, La2, logL, zlim
    for j in range(n):
        pw[j] = exp(alpha * tau * x[j])
        pw2[j] = exp(alpha * beta * tau * x[j]) if family == 1 else 0.0
    for i in range(m):
        L = levels[i]
        La = c * pow(L, -alpha)
        La2 = pow(L, -alpha * beta) if family == 1 else 0.0
        logL = log(L)
        # z <= z0  <=>  tau x >= log(L / z0)
        zlim = log(L / z0)
        acc = 0.0
        for j in range(n):
            if tau * x[j] >= zlim:
                p = 1.0
            elif family == 0:
                p = La * pw[j]
            elif family == 1:
                p = La * pw[j] * (1.0 + La2 * pw2[j]) * 0.5
            else:
                p = La * pw[j] * (logL - tau * x[j])
            if p > 1.0:
                p = 1.0
            acc += p
        out[i] = acc
    return out_arr
