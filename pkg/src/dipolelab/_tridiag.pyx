# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for symmetric tridiagonal pencils ``(T, W)``.

``T`` is given by its diagonal ``d`` and off-diagonal ``e``; ``W`` is a
positive diagonal weight.  The pure-Python twin lives in ``_tridiag_py``
and must stay numerically identical.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef double _pivmin(const double[::1] e, const double[::1] d) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = 0.0
    for i in range(e.shape[0]):
        if e[i] * e[i] > m:
            m = e[i] * e[i]
    for i in range(d.shape[0]):
        if fabs(d[i]) > m:
            m = fabs(d[i])
    if m == 0.0:
        m = 1.0
    return 2.2250738585072014e-308 / 2.220446049250313e-16 * m


cdef double _shift_floor(const double[::1] d, const double[::1] e,
                         const double[::1] w, double lam) noexcept nogil:
    # pivot floor for the shifted solve: eps * |T - lam W| keeps iterates finite
    cdef Py_ssize_t i
    cdef double m = 0.0
    for i in range(w.shape[0]):
        if fabs(lam) * w[i] > m:
            m = fabs(lam) * w[i]
        if fabs(d[i]) > m:
            m = fabs(d[i])
    for i in range(e.shape[0]):
        if fabs(e[i]) > m:
            m = fabs(e[i])
    if m == 0.0:
        return 2.2250738585072014e-308 / 2.220446049250313e-16
    return 2.220446049250313e-16 * m


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e,
                       const double[::1] w, double sigma,
                       double pivmin) noexcept nogil:
    cdef Py_ssize_t i, n = d.shape[0], neg = 0
    cdef double q = d[0] - sigma * w[0]
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        neg += 1
    for i in range(1, n):
        q = d[i] - sigma * w[i] - e[i - 1] * e[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            neg += 1
    return neg


def sturm_count(double[::1] d, double[::1] e, double[::1] w, double sigma):
    """Number of pencil eigenvalues strictly below ``sigma``."""
    return _count(d, e, w, sigma, _pivmin(e, d))


def bisect_levels(double[::1] d, double[::1] e, double[::1] w,
                  double lo, double hi, Py_ssize_t first, Py_ssize_t count,
                  double rtol=4.440892098500626e-16, Py_ssize_t maxiter=400):
    """Eigenvalues ``first .. first+count-1`` (0-based, ascending) by bisection."""
    cdef double pivmin = _pivmin(e, d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef Py_ssize_t j, it, target
    cdef double a, b, mid, floor = lo
    with nogil:
        for j in range(count):
            target = first + j
            a = floor
            b = hi
            for it in range(maxiter):
                mid = a + 0.5 * (b - a)
                if mid <= a or mid >= b:
                    break
                if _count(d, e, w, mid, pivmin) > target:
                    b = mid
                else:
                    a = mid
                if b - a <= rtol * max(fabs(a), fabs(b)):
                    break
            out[j] = a + 0.5 * (b - a)
            floor = a
    return out


def inverse_iteration(double[::1] d, double[::1] e, double[::1] w,
                      double lam, double[::1] x0, Py_ssize_t niter=3):
    """Eigenvector of the pencil for eigenvalue ``lam``, ``W``-normalized."""
    cdef Py_ssize_t n = d.shape[0], i, it
    cdef double pivmin = _shift_floor(d, e, w, lam)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.array(x0, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] piv = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rhs = np.empty(n, dtype=np.float64)
    cdef double[::1] xv = x
    cdef double[::1] pv = piv
    cdef double[::1] rv = rhs
    cdef double s, q
    with nogil:
        # LDL^T of (T - lam W), reused across iterations
        q = d[0] - lam * w[0]
        if fabs(q) < pivmin:
            q = pivmin
        pv[0] = q
        for i in range(1, n):
            q = d[i] - lam * w[i] - e[i - 1] * e[i - 1] / pv[i - 1]
            if fabs(q) < pivmin:
                q = pivmin
            pv[i] = q
        for it in range(niter):
            rv[0] = w[0] * xv[0]
            for i in range(1, n):
                rv[i] = w[i] * xv[i] - e[i - 1] / pv[i - 1] * rv[i - 1]
            xv[n - 1] = rv[n - 1] / pv[n - 1]
            for i in range(n - 2, -1, -1):
                xv[i] = (rv[i] - e[i] * xv[i + 1]) / pv[i]
            s = 0.0
            for i in range(n):
                s += w[i] * xv[i] * xv[i]
            s = 1.0 / sqrt(s)
            for i in range(n):
                xv[i] *= s
    return x
