# cython: language_level=3
"""Compiled kernels for Gaussian sums over quadrature nodes.

Mirrors ``occtomo._fallback`` one function at a time; both must agree to
rounding error.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


def gauss_sum(const double[:, ::1] points, const double[:, ::1] centers,
              const double[:, ::1] weights, double mu):
    """out[p, c] = sum_q weights[q, c] * exp(-mu * |points[p] - centers[q]|^2)."""
    cdef Py_ssize_t n_pts = points.shape[0]
    cdef Py_ssize_t n_ctr = centers.shape[0]
    cdef Py_ssize_t n_col = weights.shape[1]
    if weights.shape[0] != n_ctr:
        raise ValueError("weights must have one row per center")
    out_arr = np.zeros((n_pts, n_col), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t p, q, c
    cdef double dx, dy, k
    with nogil:
        for p in range(n_pts):
            for q in range(n_ctr):
                dx = points[p, 0] - centers[q, 0]
                dy = points[p, 1] - centers[q, 1]
                k = exp(-mu * (dx * dx + dy * dy))
                for c in range(n_col):
                    out[p, c] += weights[q, c] * k
    return out_arr


cdef double _pair(const double[:, :, ::1] a, const double[:, ::1] wa, Py_ssize_t i,
                  const double[:, :, ::1] b, const double[:, ::1] wb, Py_ssize_t j,
                  double mu) noexcept nogil:
    cdef Py_ssize_t s, t
    cdef Py_ssize_t na = a.shape[1]
    cdef Py_ssize_t nb = b.shape[1]
    cdef double dx, dy, row, total = 0.0
    for s in range(na):
        row = 0.0
        for t in range(nb):
            dx = a[i, s, 0] - b[j, t, 0]
            dy = a[i, s, 1] - b[j, t, 1]
            row += wb[j, t] * exp(-mu * (dx * dx + dy * dy))
        total += wa[i, s] * row
    return total


def occupation_gram(const double[:, :, ::1] a, const double[:, ::1] wa,
                    const double[:, :, ::1] b, const double[:, ::1] wb,
                    double mu, bint symmetric=False):
    """out[i, j] = sum_s sum_t wa[i, s] wb[j, t] exp(-mu |a[i, s] - b[j, t]|^2).

    With ``symmetric`` the caller guarantees ``a is b``; only the upper
    triangle is computed and mirrored.
    """
    cdef Py_ssize_t ma = a.shape[0]
    cdef Py_ssize_t mb = b.shape[0]
    out_arr = np.empty((ma, mb), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    with nogil:
        if symmetric:
            for i in range(ma):
                for j in range(i, mb):
                    out[i, j] = _pair(a, wa, i, b, wb, j, mu)
                    out[j, i] = out[i, j]
        else:
            for i in range(ma):
                for j in range(mb):
                    out[i, j] = _pair(a, wa, i, b, wb, j, mu)
    return out_arr
