"""Pure-Python twin of the compiled ``_tridiag`` kernels.

Same algorithms, same pivot guards, same stopping rules; used when the
extension is not built or ``DIPOLELAB_PURE_PYTHON`` is set.
"""

import math

import numpy as np

_TINY = 2.2250738585072014e-308 / 2.220446049250313e-16


def _pivmin(e, d):
    m = 0.0
    for v in e:
        if v * v > m:
            m = v * v
    for v in d:
        if abs(v) > m:
            m = abs(v)
    if m == 0.0:
        m = 1.0
    return _TINY * m


def _count(d, e2, w, sigma, pivmin):
    q = d[0] - sigma * w[0]
    if abs(q) < pivmin:
        q = -pivmin
    neg = 1 if q < 0.0 else 0
    for i in range(1, len(d)):
        q = d[i] - sigma * w[i] - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            neg += 1
    return neg


def _floats(*arrays):
    return [np.asarray(a, dtype=float).tolist() for a in arrays]


def _shift_floor(d, e, w, lam):
    # pivot floor for the shifted solve: eps * |T - lam W| keeps iterates finite
    m = max(abs(lam) * max(w), max(abs(v) for v in d), max((abs(v) for v in e), default=0.0))
    return 2.220446049250313e-16 * m if m > 0 else _TINY


def sturm_count(d, e, w, sigma):
    """Number of pencil eigenvalues strictly below ``sigma``."""
    d, e, w = _floats(d, e, w)
    return _count(d, [v * v for v in e], w, float(sigma), _pivmin(e, d))


def bisect_levels(d, e, w, lo, hi, first, count, rtol=4.440892098500626e-16, maxiter=400):
    """Eigenvalues ``first .. first+count-1`` (0-based, ascending) by bisection."""
    d, e, w = _floats(d, e, w)
    e2 = [v * v for v in e]
    pivmin = _pivmin(e, d)
    out = np.empty(count)
    floor = float(lo)
    for j in range(count):
        target = first + j
        a, b = floor, float(hi)
        for _ in range(maxiter):
            mid = a + 0.5 * (b - a)
            if mid <= a or mid >= b:
                break
            if _count(d, e2, w, mid, pivmin) > target:
                b = mid
            else:
                a = mid
            if b - a <= rtol * max(abs(a), abs(b)):
                break
        out[j] = a + 0.5 * (b - a)
        floor = a
    return out


def inverse_iteration(d, e, w, lam, x0, niter=3):
    """Eigenvector of the pencil for eigenvalue ``lam``, ``W``-normalized."""
    d, e, w = _floats(d, e, w)
    n = len(d)
    pivmin = _shift_floor(d, e, w, lam)
    piv = [0.0] * n
    q = d[0] - lam * w[0]
    piv[0] = pivmin if abs(q) < pivmin else q
    for i in range(1, n):
        q = d[i] - lam * w[i] - e[i - 1] * e[i - 1] / piv[i - 1]
        piv[i] = pivmin if abs(q) < pivmin else q
    x = [float(v) for v in x0]
    r = [0.0] * n
    for _ in range(niter):
        r[0] = w[0] * x[0]
        for i in range(1, n):
            r[i] = w[i] * x[i] - e[i - 1] / piv[i - 1] * r[i - 1]
        x[n - 1] = r[n - 1] / piv[n - 1]
        for i in range(n - 2, -1, -1):
            x[i] = (r[i] - e[i] * x[i + 1]) / piv[i]
        s = 0.0
        for wi, xi in zip(w, x):
            s += wi * xi * xi
        s = 1.0 / math.sqrt(s)
        x = [xi * s for xi in x]
    return np.asarray(x)
