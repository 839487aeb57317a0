"""Classical planar motion under the effective Hamiltonian.

With ``Pi = p + alpha*B*Ebar`` the kinetic momentum,

    dx/dt = Pi / M*
    dp/dt = -(alpha*B/M*) J^T Pi - alpha*k^2 x / r^4

where ``J`` is the Jacobian of ``Ebar = k (y, -x)/r^2``.  Since ``Ebar`` is
a gradient away from the origin, the magnetic term only renormalizes the
mass; the ``-alpha k^2/(2 r^2)`` well drives capture when the angular
momentum is too small.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .core import FieldConfig, ParticleParams

CAPTURE_FACTOR = 1e-6
ESCAPE_FACTOR = 1e6


class Outcome(str, enum.Enum):
    CAPTURED = "captured"
    ESCAPED = "escaped"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class TrajectoryState:
    x: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(2)
        p = np.asarray(self.p, dtype=float).reshape(2)
        if x[0] == 0.0 and x[1] == 0.0:
            raise ValueError("state at the origin (line charge)")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def p_theta(self) -> float:
        return float(self.x[0] * self.p[1] - self.x[1] * self.p[0])


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    energy_log: np.ndarray
    p_theta_log: np.ndarray
    outcome: Outcome
    t_capture: float | None = None
    diagnostic: str = ""
    min_radius: float = field(init=False)

    def __post_init__(self):
        self.min_radius = float(np.min(np.hypot(self.x[:, 0], self.x[:, 1])))

    @property
    def samples(self) -> list[TrajectoryState]:
        return [TrajectoryState(x, p, t) for t, x, p in zip(self.t, self.x, self.p)]

    def relative_drift(self, log: np.ndarray) -> float:
        ref = abs(log[0]) if log[0] != 0 else 1.0
        return float(np.max(np.abs(log - log[0])) / ref)

    @property
    def energy_drift(self) -> float:
        return self.relative_drift(self.energy_log)

    @property
    def p_theta_drift(self) -> float:
        return self.relative_drift(self.p_theta_log)


def _parts(x, particle: ParticleParams, fields: FieldConfig):
    x1, x2 = float(x[0]), float(x[1])
    r2 = x1 * x1 + x2 * x2
    if r2 == 0.0:
        raise ValueError("the Hamiltonian is singular at the origin")
    g = particle.alpha * fields.B * fields.k / r2
    m_eff = particle.M + particle.alpha * fields.B * fields.B
    return x1, x2, r2, g, m_eff


def hamiltonian_value(s: TrajectoryState, particle: ParticleParams, fields: FieldConfig) -> float:
    x1, x2, r2, g, m_eff = _parts(s.x, particle, fields)
    pi1 = s.p[0] + g * x2
    pi2 = s.p[1] - g * x1
    return 0.5 * (pi1 * pi1 + pi2 * pi2) / m_eff - 0.5 * particle.alpha * fields.k * fields.k / r2


def eom_rhs(s: TrajectoryState, particle: ParticleParams, fields: FieldConfig):
    """Hamilton's equations ``(dx/dt, dp/dt)`` with analytic gradients."""
    x1, x2, r2, g, m_eff = _parts(s.x, particle, fields)
    pi1 = s.p[0] + g * x2
    pi2 = s.p[1] - g * x1
    # Jacobian of alpha*B*Ebar, symmetric: g/r^2 * [[-2xy, x^2-y^2], [x^2-y^2, 2xy]]
    c = g / r2
    jxx, jxy, jyy = -2 * x1 * x2 * c, (x1 * x1 - x2 * x2) * c, 2 * x1 * x2 * c
    well = particle.alpha * fields.k * fields.k / (r2 * r2)
    dx = np.array([pi1, pi2]) / m_eff
    dp = -np.array([jxx * pi1 + jxy * pi2, jxy * pi1 + jyy * pi2]) / m_eff - well * np.array([x1, x2])
    return dx, dp


def integrate(
    s0: TrajectoryState,
    t_end: float,
    tol: float,
    particle: ParticleParams,
    fields: FieldConfig,
    capture_factor: float = CAPTURE_FACTOR,
    escape_factor: float = ESCAPE_FACTOR,
) -> Trajectory:
    """Adaptive DOP853 integration with capture and escape termination.

    ``tol`` is used as both relative and absolute (scaled by the initial
    radius and momentum) local error tolerance.  Step-size underflow is
    reported as capture.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not t_end > s0.t:
        raise ValueError("t_end must exceed the initial time")
    r0 = float(np.hypot(*s0.x))
    m_eff = _parts(s0.x, particle, fields)[-1]
    alpha_k2 = particle.alpha * fields.k * fields.k
    g0 = particle.alpha * fields.B * fields.k

    def rhs(_t, y):
        x1, x2, p1, p2 = y
        r2 = x1 * x1 + x2 * x2
        c = g0 / r2
        pi1 = p1 + c * x2
        pi2 = p2 - c * x1
        c2 = c / r2
        jxx, jxy, jyy = -2 * x1 * x2 * c2, (x1 * x1 - x2 * x2) * c2, 2 * x1 * x2 * c2
        well = alpha_k2 / (r2 * r2)
        return [
            pi1 / m_eff,
            pi2 / m_eff,
            -(jxx * pi1 + jxy * pi2) / m_eff - well * x1,
            -(jxy * pi1 + jyy * pi2) / m_eff - well * x2,
        ]

    def captured(_t, y):
        return math.hypot(y[0], y[1]) - capture_factor * r0

    def escaped(_t, y):
        return math.hypot(y[0], y[1]) - escape_factor * r0

    captured.terminal = escaped.terminal = True
    captured.direction = -1
    escaped.direction = 1

    y0 = np.concatenate([s0.x, s0.p])
    scale = np.array([r0, r0, *([max(float(np.hypot(*s0.p)), 1e-300)] * 2)])
    sol = solve_ivp(
        rhs, (s0.t, t_end), y0, method="DOP853", rtol=tol, atol=tol * scale, events=(captured, escaped)
    )
    x = sol.y[:2].T
    p = sol.y[2:].T
    outcome, t_cap, diag = Outcome.BOUNDED, None, ""
    if sol.status == 1:
        if sol.t_events[0].size:
            outcome, t_cap = Outcome.CAPTURED, float(sol.t_events[0][0])
        else:
            outcome = Outcome.ESCAPED
    elif sol.status == -1:
        outcome, t_cap, diag = Outcome.CAPTURED, float(sol.t[-1]), f"step-size underflow: {sol.message}"
    energy = np.array([hamiltonian_value(TrajectoryState(a, b), particle, fields) for a, b in zip(x, p)])
    p_theta = x[:, 0] * p[:, 1] - x[:, 1] * p[:, 0]
    return Trajectory(sol.t, x, p, energy, p_theta, outcome, t_cap, diag)


@dataclass(frozen=True)
class CapturePrediction:
    captured_predicted: bool
    threshold: float


def capture_criterion(p_theta: float, particle: ParticleParams, fields: FieldConfig) -> CapturePrediction:
    """Capture iff ``p_theta^2 < M alpha k^2`` (``B = 0`` only).

    The effective radial potential is ``(p_theta^2 - M alpha k^2)/(2 M r^2)``;
    the prediction applies to launches that are not moving outward with
    positive energy (e.g. tangential launches).
    """
    if fields.B != 0:
        raise ValueError("the capture criterion is derived for B = 0 only")
    threshold = particle.M * particle.alpha * fields.k * fields.k
    return CapturePrediction(p_theta * p_theta < threshold, threshold)
