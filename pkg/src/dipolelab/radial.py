"""Radial eigenproblems of a single channel between hard walls.

The channel equation

    (1/r) d/dr (r df/dr) + (eps - nu^2/r^2) f = 0,     eps = 2 M* E / hbar^2,

is discretized in conservative (flux) form, which gives a symmetric
tridiagonal pencil ``A f = eps W f`` with ``W`` the quadrature weight of
the ``r dr`` measure.  Writing ``u = sqrt(W) f`` turns the pencil into the
flat-measure ``u``-form with the ``(nu^2 - 1/4)/r^2`` potential; the
pencil is the same operator as the naive central-difference ``f``-form
(first-derivative term included) up to a diagonal similarity.

Grids
-----
``linear`` with ``r_inner == 0``
    cell-centred nodes ``r_i = (i - 1/2) h``; the flux through ``r = 0``
    vanishes, which is the regular boundary condition for every ``m``.
``linear`` with ``r_inner > 0``
    nodes ``r_inner + i h`` with Dirichlet walls at both ends.
``logarithmic``
    uniform in ``s = log r``; the pencil becomes ``-f_ss + nu^2 f = eps r^2 f``.

Eigenvalues come from Sturm-count bisection on the pencil (never on the
explicitly scaled matrix), which keeps eigenvalues near zero accurate to a
relative precision even when ``r_outer / r_inner`` is huge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import ChannelClass, classify_channel

LINEAR = "linear"
LOGARITHMIC = "logarithmic"

RESIDUAL_TOL = 1e-9
MIN_STEPS_PER_WAVELENGTH = 8


class ResolutionError(ValueError):
    """Requested levels are not resolved by the grid."""


class IllPosedError(ValueError):
    """The operator is unbounded below without a hard core."""


@dataclass(frozen=True)
class RadialProblem:
    nu_sq: float
    r_inner: float
    r_outer: float
    n_points: int = 4000
    spacing: str = LINEAR

    def __post_init__(self):
        if not math.isfinite(self.nu_sq):
            raise ValueError("nu_sq must be finite")
        if self.spacing not in (LINEAR, LOGARITHMIC):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if not (self.r_inner >= 0 and self.r_outer > self.r_inner and math.isfinite(self.r_outer)):
            raise ValueError("need 0 <= r_inner < r_outer < inf")
        if int(self.n_points) != self.n_points or self.n_points < 64:
            raise ValueError("n_points must be an integer >= 64")
        if self.spacing == LOGARITHMIC and self.r_inner == 0:
            raise ValueError("logarithmic spacing requires r_inner > 0")
        if self.nu_sq < 0 and self.r_inner == 0:
            raise IllPosedError(
                f"nu^2 = {self.nu_sq} < 0: the channel operator is unbounded below "
                "without an inner cutoff (fall to the center)"
            )

    @property
    def channel_class(self) -> ChannelClass:
        return classify_channel(self.nu_sq)

    @property
    def u_form_coefficient(self) -> float:
        return self.nu_sq - 0.25

    def scaled(self, lam: float) -> "RadialProblem":
        return RadialProblem(self.nu_sq, lam * self.r_inner, lam * self.r_outer, self.n_points, self.spacing)


@dataclass(frozen=True)
class Pencil:
    """Tridiagonal pencil ``(A, W)`` on the interior nodes ``r``."""

    diag: np.ndarray
    off: np.ndarray
    weight: np.ndarray
    r: np.ndarray
    step: float

    def matvec(self, f: np.ndarray) -> np.ndarray:
        y = self.diag * f
        y[:-1] += self.off * f[1:]
        y[1:] += self.off * f[:-1]
        return y

    def gershgorin(self) -> tuple[float, float]:
        """Spectral bounds of the scaled matrix ``W^-1/2 A W^-1/2``."""
        sw = np.sqrt(self.weight)
        c = self.diag / self.weight
        o = np.abs(self.off) / (sw[:-1] * sw[1:])
        rad = np.zeros_like(c)
        rad[:-1] += o
        rad[1:] += o
        return float(np.min(c - rad)), float(np.max(c + rad))

    def dense_f_form(self) -> np.ndarray:
        """Non-symmetric ``W^-1 A`` (the plain ``f``-form); small grids only."""
        n = self.diag.size
        mat = np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)
        return mat / self.weight[:, None] if n else mat


def build_pencil(p: RadialProblem) -> Pencil:
    n = int(p.n_points)
    if p.spacing == LOGARITHMIC:
        h = math.log(p.r_outer / p.r_inner) / (n + 1)
        r = p.r_inner * np.exp(h * np.arange(1, n + 1))
        diag = np.full(n, 2.0 / h + p.nu_sq * h)
        off = np.full(n - 1, -1.0 / h)
        return Pencil(diag, off, r * r * h, r, h)
    if p.r_inner == 0:
        h = p.r_outer / (n + 0.5)
        r = (np.arange(1, n + 1) - 0.5) * h
        left = np.arange(0, n) * h
    else:
        h = (p.r_outer - p.r_inner) / (n + 1)
        r = p.r_inner + np.arange(1, n + 1) * h
        left = r - 0.5 * h
    right = left + h
    diag = (left + right) / h + p.nu_sq * h / r
    off = -right[:-1] / h
    return Pencil(diag, off, r * h, r, h)


@dataclass(frozen=True)
class SpectralResult:
    """Lowest eigenpairs of one radial problem.

    ``eigenvalues`` are ``eps = 2 M* E / hbar^2``; ``eigenvectors[j]`` holds
    ``f`` on ``r`` normalized so that ``sum f^2 W = 1`` (the ``r dr``
    quadrature).  ``residual_norms`` are backward errors
    ``|W^-1/2 (A - eps W) f| / |S|`` with ``|S|`` the Gershgorin bound.
    """

    problem: RadialProblem
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_norms: np.ndarray
    r: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    backend: str = kernels.BACKEND

    @property
    def nu_sq(self) -> float:
        return self.problem.nu_sq

    @property
    def u_form_coefficient(self) -> float:
        return self.problem.u_form_coefficient

    def gram(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.weight) @ v.T


def _eigenpairs(pen: Pencil, lo: float, hi: float, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    vals = np.asarray(kernels.bisect_levels(pen.diag, pen.off, pen.weight, lo, hi, 0, count), dtype=float)
    n = pen.diag.size
    norm = max(abs(lo), abs(hi))
    rng = np.random.default_rng(20250101)
    vecs = np.empty((count, n))
    res = np.empty(count)
    for j, lam in enumerate(vals):
        x = kernels.inverse_iteration(pen.diag, pen.off, pen.weight, float(lam), rng.uniform(0.5, 1.5, n), 3)
        x = np.asarray(x, dtype=float)
        for _ in range(2):
            if j:
                x -= vecs[:j].T @ ((vecs[:j] * pen.weight) @ x)
            x /= math.sqrt(float(np.dot(pen.weight * x, x)))
        x *= 1.0 if x[int(np.argmax(np.abs(x)))] > 0 else -1.0
        vecs[j] = x
        r = pen.matvec(x) - lam * pen.weight * x
        res[j] = float(np.linalg.norm(r / np.sqrt(pen.weight))) / norm
    return vals, vecs, res


def _padded_bounds(pen: Pencil) -> tuple[float, float]:
    lo, hi = pen.gershgorin()
    pad = 1e-12 * max(abs(lo), abs(hi)) + 1e-300
    return lo - pad, hi + pad


def _largest_step(p: RadialProblem, pen: Pencil) -> float:
    if p.spacing == LOGARITHMIC:
        return float(pen.r[-1] * math.expm1(pen.step))
    return pen.step


def dirichlet_spectrum(p: RadialProblem, n_levels: int) -> SpectralResult:
    """Lowest ``n_levels`` eigenpairs with hard walls at ``r_inner`` and ``r_outer``."""
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if n_levels > p.n_points // 4:
        raise ResolutionError(f"n_levels={n_levels} exceeds n_points/4={p.n_points // 4}")
    pen = build_pencil(p)
    lo, hi = _padded_bounds(pen)
    vals, vecs, res = _eigenpairs(pen, lo, hi, n_levels)
    top = vals[-1]
    if top > 0:
        wavelength = 2 * math.pi / math.sqrt(top)
        if wavelength < MIN_STEPS_PER_WAVELENGTH * _largest_step(p, pen):
            raise ResolutionError(
                f"level {n_levels} has wavelength {wavelength:.3g}, below "
                f"{MIN_STEPS_PER_WAVELENGTH} grid steps; refine the grid"
            )
    return SpectralResult(p, vals, vecs, res, pen.r, pen.weight)


def count_bound_states(p: RadialProblem) -> int:
    pen = build_pencil(p)
    return int(kernels.sturm_count(pen.diag, pen.off, pen.weight, 0.0))


def regularized_bound_spectrum(nu_tilde: float, p: RadialProblem, n_levels: int | None = None) -> SpectralResult:
    """Negative-energy states of the channel ``nu^2 = -nu_tilde^2`` with a hard core.

    ``p.nu_sq`` is ignored in favour of ``-nu_tilde**2``.  The levels form
    the geometric tower ``eps_{n+1}/eps_n -> exp(-2 pi/nu_tilde)``; their
    number grows with ``log(r_outer/r_inner)``.
    """
    if not nu_tilde > 0:
        raise ValueError("nu_tilde must be positive")
    if p.r_inner <= 0:
        raise IllPosedError("a supercritical channel needs r_inner > 0")
    if p.spacing != LOGARITHMIC:
        raise ValueError("the bound-state tower needs a logarithmic grid")
    if p.r_outer / p.r_inner < 1e4:
        raise ValueError("r_outer/r_inner must be >= 1e4 to hold a tower")
    q = RadialProblem(-nu_tilde * nu_tilde, p.r_inner, p.r_outer, p.n_points, LOGARITHMIC)
    pen = build_pencil(q)
    if 2 * math.pi / nu_tilde < MIN_STEPS_PER_WAVELENGTH * pen.step:
        raise ResolutionError("log-grid step too coarse for the log-periodic oscillation")
    available = int(kernels.sturm_count(pen.diag, pen.off, pen.weight, 0.0))
    count = available if n_levels is None else min(n_levels, available)
    if count == 0:
        empty = np.empty((0,))
        return SpectralResult(q, empty, np.empty((0, pen.r.size)), empty, pen.r, pen.weight)
    lo, _ = _padded_bounds(pen)
    vals, vecs, res = _eigenpairs(pen, lo, 0.0, count)
    return SpectralResult(q, vals, vecs, res, pen.r, pen.weight)


def tower_ratio(nu_tilde: float) -> float:
    """Asymptotic ratio of successive bound-state energies."""
    return math.exp(-2 * math.pi / nu_tilde)


def cutoff_scaling_probe(nu_tilde: float, cutoffs, r_outer: float, n_points: int = 4000) -> list[tuple[float, float]]:
    """Ground energy against the hard-core radius ``a`` at fixed ``r_outer``."""
    cutoffs = [float(a) for a in cutoffs]
    if any(a <= 0 for a in cutoffs):
        raise ValueError("cutoffs must be positive")
    if any(b >= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be strictly descending")
    out = []
    for a in cutoffs:
        p = RadialProblem(-nu_tilde * nu_tilde, a, r_outer, n_points, LOGARITHMIC)
        res = regularized_bound_spectrum(nu_tilde, p, n_levels=1)
        out.append((a, float(res.eigenvalues[0])))
    return out


def loglog_slope(pairs) -> float:
    """Least-squares slope of ``log|eps|`` against ``log a``."""
    a = np.log([p[0] for p in pairs])
    e = np.log(np.abs([p[1] for p in pairs]))
    return float(np.polyfit(a, e, 1)[0])
