"""Regular radial solutions of admissible channels and their zeros."""

import math

from scipy.optimize import brentq

SERIES_RTOL = 1e-12


def bessel_j(nu: float, x: float) -> float:
    """``J_nu(x)`` from the ascending power series.

    Terms are summed with :func:`math.fsum` until the next term falls below
    ``SERIES_RTOL`` of the partial sum.  Cancellation costs roughly
    ``log10(exp(x))`` digits, so the result is meant for ``x`` up to a few
    tens, which covers the low zeros used here.
    """
    if nu < 0:
        raise ValueError("order must be >= 0")
    if x < 0:
        raise ValueError("argument must be >= 0")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    half = 0.5 * x
    # log-space leading term avoids overflow of (x/2)^nu / Gamma(nu+1) for large nu
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0))
    q = -half * half
    terms = [term]
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        terms.append(term)
        # terms shrink monotonically once k*(k+nu) > (x/2)^2
        if k * (k + nu) > half * half and abs(term) <= SERIES_RTOL * abs(math.fsum(terms)):
            break
        if k > 10000:
            raise ArithmeticError(f"series did not converge for nu={nu}, x={x}")
    return math.fsum(terms)


def free_radial_solution(nu: float, eps: float, r: float) -> float:
    """Regular solution ``J_nu(sqrt(eps)*r)`` of a channel with ``nu^2 >= 0``."""
    if nu < 0:
        raise ValueError("no regular solution for a supercritical channel (nu < 0)")
    if not eps > 0:
        raise ValueError("energy must be positive")
    if not r > 0:
        raise ValueError("radius must be positive")
    return bessel_j(nu, math.sqrt(eps) * r)


def bessel_zero(nu: float, n: int, xtol: float = 1e-13) -> float:
    """``n``-th positive zero of ``J_nu``, bracketed on a fixed scan then refined."""
    if nu < 0:
        raise ValueError("order must be >= 0")
    if n < 1:
        raise ValueError("zero index starts at 1")
    # no zero below nu (and consecutive zeros are further apart than the step)
    step = 0.25
    a = max(nu, step)
    fa = bessel_j(nu, a)
    found = 0
    while True:
        b = a + step
        fb = bessel_j(nu, b)
        if fb == 0.0:
            found += 1
            if found == n:
                return b
            a, fa = b + 1e-9, bessel_j(nu, b + 1e-9)
            continue
        if fa * fb < 0:
            found += 1
            if found == n:
                return brentq(lambda t: bessel_j(nu, t), a, b, xtol=xtol, rtol=1e-15)
        a, fa = b, fb
