"""Holonomy of the induced gauge potential and the pure-magnetic limit.

The gauge potential ``alpha*B*Ebar = -alpha*B*k * grad(theta)`` is a pure
gauge away from the line charge, so its loop integral only counts windings:
``phase = -2 pi n a_B``.  Every phase carries the well-posedness verdict of
the underlying quantum problem; with ``a_B != 0`` that verdict is always
ill-posed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .bessel import bessel_zero
from .core import (
    Couplings,
    FieldConfig,
    ParticleParams,
    WellPosednessReport,
    reduce,
    well_posedness,
)
from .radial import RadialProblem, dirichlet_spectrum

R_MIN_GUARD = 1e-9
CLOSURE_TOL = 1e-12
WINDING_TOL = 1e-6
QUAD_ABS_TOL = 1e-9


class PathError(ValueError):
    pass


def _segment_distance(p: np.ndarray, q: np.ndarray) -> float:
    d = q - p
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, -float(p @ d) / dd))
    return float(np.hypot(*(p + t * d)))


@dataclass(frozen=True)
class LoopPath:
    """Closed polyline about (or away from) the line charge.

    ``vertices`` repeats the first point at the end.  The winding number is
    computed from the summed signed angles of the segments.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise PathError("a loop needs at least two segments of 2-vectors")
        if np.max(np.abs(v[0] - v[-1])) > CLOSURE_TOL:
            raise PathError("path is not closed (first and last vertex differ)")
        for a, b in zip(v[:-1], v[1:]):
            if _segment_distance(a, b) < R_MIN_GUARD:
                raise PathError("path passes through the line charge")
        object.__setattr__(self, "vertices", v)

    @property
    def segments(self):
        return zip(self.vertices[:-1], self.vertices[1:])

    @property
    def winding(self) -> int:
        total = 0.0
        for a, b in self.segments:
            total += math.atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1])
        turns = total / (2 * math.pi)
        n = round(turns)
        if abs(turns - n) > WINDING_TOL:
            raise PathError(f"winding number {turns} is not an integer")
        return int(n)

    def reversed(self) -> "LoopPath":
        return LoopPath(self.vertices[::-1].copy())

    def repeated(self, times: int) -> "LoopPath":
        return LoopPath(np.vstack([self.vertices[:-1]] * times + [self.vertices[:1]]))

    @classmethod
    def polygon(cls, points) -> "LoopPath":
        pts = np.asarray(points, dtype=float)
        return cls(np.vstack([pts, pts[:1]]))

    @classmethod
    def ellipse(cls, center=(0.0, 0.0), semi_axes=(1.0, 1.0), n_vertices: int = 64, turns: int = 1) -> "LoopPath":
        """Inscribed polygon; a negative ``turns`` runs clockwise."""
        if turns == 0:
            raise PathError("use a loop away from the origin for zero winding")
        t = np.linspace(0.0, 2 * math.pi * turns, abs(turns) * n_vertices + 1)
        pts = np.column_stack([center[0] + semi_axes[0] * np.cos(t), center[1] + semi_axes[1] * np.sin(t)])
        pts[-1] = pts[0]
        return cls(pts)

    @classmethod
    def circle(cls, center=(0.0, 0.0), radius: float = 1.0, n_vertices: int = 64, turns: int = 1) -> "LoopPath":
        return cls.ellipse(center, (radius, radius), n_vertices, turns)

    @classmethod
    def square(cls, center=(0.0, 0.0), side: float = 1.0) -> "LoopPath":
        h = 0.5 * side
        cx, cy = center
        return cls.polygon([(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)])


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    winding: int
    couplings: Couplings
    verdict: WellPosednessReport

    @property
    def physical(self) -> bool:
        return self.verdict.well_posed


def _segment_integral(a: np.ndarray, b: np.ndarray, gauge_scale: float) -> float:
    d = b - a

    def integrand(t):
        x = a[0] + t * d[0]
        y = a[1] + t * d[1]
        return gauge_scale * (y * d[0] - x * d[1]) / (x * x + y * y)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=QUAD_ABS_TOL * 1e-3, epsrel=1e-13, limit=200)
    return val


def loop_holonomy(path: LoopPath, particle: ParticleParams, fields: FieldConfig) -> PhaseResult:
    """``(1/hbar)`` times the loop integral of ``alpha*B*Ebar``, segment by segment."""
    c = reduce(particle, fields)
    scale = particle.alpha * fields.B * fields.k / fields.hbar
    phase = math.fsum(_segment_integral(a, b, scale) for a, b in path.segments) if scale else 0.0
    return PhaseResult(phase, path.winding, c, well_posedness(c))


def winding_phase(n: int, c: Couplings) -> float:
    # + 0.0 folds -0.0 into 0.0
    return -2 * math.pi * n * c.a_B + 0.0


@dataclass(frozen=True)
class FringeShift:
    phase_difference: float
    verdict: WellPosednessReport
    consistent: bool

    @property
    def physical(self) -> bool:
        return self.consistent and self.verdict.well_posed


def fringe_shift_prediction(c: Couplings) -> FringeShift:
    """Phase between two beams differing by one winding, with its verdict.

    A nonzero ``a_B`` with ``a_E == 0`` cannot come from any particle and is
    flagged ``consistent=False``; any ``a_E > 0`` makes the prediction
    non-physical.
    """
    return FringeShift(winding_phase(1, c), well_posedness(c), c.consistent)


@dataclass(frozen=True)
class MassRenormalizationCheck:
    max_rel_error: float
    energies: dict
    expected: dict


def mass_renormalization_check(
    particle: ParticleParams,
    fields: FieldConfig,
    R: float,
    n_levels: int,
    m_values=(0, 1, 2),
    n_points: int = 4000,
) -> MassRenormalizationCheck:
    """Disk spectrum at ``k = 0`` against ``hbar^2 j_{m,n}^2 / (2 (M + alpha B^2) R^2)``."""
    if fields.k != 0:
        raise ValueError("mass renormalization holds only without electric field (k = 0)")
    c = reduce(particle, fields)
    energies, expected = {}, {}
    worst = 0.0
    h2 = fields.hbar * fields.hbar
    for m in m_values:
        res = dirichlet_spectrum(RadialProblem(float(m * m), 0.0, R, n_points), n_levels)
        got = h2 * res.eigenvalues / (2 * c.m_eff)
        want = np.array([h2 * bessel_zero(abs(m), n) ** 2 / (2 * c.m_eff * R * R) for n in range(1, n_levels + 1)])
        energies[m], expected[m] = got, want
        worst = max(worst, float(np.max(np.abs(got - want) / want)))
    return MassRenormalizationCheck(worst, energies, expected)
