"""Physical parameters, the canonical reduction and channel bookkeeping.

A neutral particle of mass ``M`` and polarizability ``alpha`` moves in the
plane perpendicular to a uniform field ``B``, with a radial electric field
of magnitude ``k/r`` from a line charge.  The planar Hamiltonian is

    H = (p + alpha*B*Ebar)^2 / (2*(M + alpha*B^2)) - alpha*|E|^2 / 2

with ``Ebar`` the 90-degree rotation of ``E``.  Separation in polar
coordinates leaves, in channel ``m``, an inverse-square coefficient

    nu^2(m) = m^2 + 2*m*a_B - a_E,   a_B = alpha*k*B/hbar,  a_E = M*alpha*k^2/hbar^2.

Sign convention: ``Ebar_i = eps_ij E_j`` with ``eps_12 = +1``, so
``Ebar = k*(y, -x)/r^2``.  Flipping it flips the holonomy sign only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class ChannelClass(str, enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class ParticleParams:
    """Mass ``M`` (> 0) and polarizability ``alpha`` (>= 0)."""

    M: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.M) and self.M > 0):
            raise ValueError(f"mass must be positive and finite, got M={self.M!r}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError(f"polarizability must be >= 0, got alpha={self.alpha!r}")


@dataclass(frozen=True)
class FieldConfig:
    """Line-charge strength ``k`` (|E| = k/r), magnetic field ``B`` and ``hbar``.

    ``k`` must be non-negative; use :meth:`normalized` to fold a negative
    line charge into the radial direction.
    """

    k: float
    B: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("k", "B", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.k < 0:
            raise ValueError(f"k must be >= 0 (use FieldConfig.normalized), got {self.k!r}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")

    @classmethod
    def normalized(cls, k: float, B: float, hbar: float = 1.0) -> "FieldConfig":
        # only k^2 and k*B enter after the radial unit vector absorbs sign(k)
        return cls(abs(k), B if k >= 0 else -B, hbar) if k != 0 else cls(0.0, B, hbar)


@dataclass(frozen=True)
class Couplings:
    """Dimensionless gauge coupling ``a_B``, attraction ``a_E`` and ``m_eff``.

    ``m_eff`` defaults to 1 so that bare dimensionless couplings can be
    analysed without a particle attached.
    """

    a_B: float
    a_E: float
    m_eff: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a_B) and math.isfinite(self.a_E)):
            raise ValueError("couplings must be finite")
        if self.a_E < 0:
            raise ValueError(f"a_E must be >= 0, got {self.a_E!r}")
        if not self.m_eff > 0:
            raise ValueError(f"m_eff must be positive, got {self.m_eff!r}")

    @property
    def consistent(self) -> bool:
        """Whether some (M, alpha, k, B) can produce these couplings.

        ``a_B^2 = a_E * alpha*B^2/M`` forces ``a_B = 0`` whenever ``a_E = 0``;
        any ``a_B`` is reachable once ``a_E > 0``.
        """
        return self.a_E > 0 or self.a_B == 0


@dataclass(frozen=True)
class Channel:
    m: int
    nu_sq: float
    cls: ChannelClass

    @property
    def u_form_coefficient(self) -> float:
        """Coefficient ``nu^2 - 1/4`` after the flat-measure substitution."""
        return self.nu_sq - 0.25


@dataclass(frozen=True)
class WellPosednessReport:
    well_posed: bool
    violating_m: tuple[int, ...]
    m_scan_bound: int
    channels: tuple[Channel, ...] = field(default=(), repr=False, compare=False)

    @property
    def verdict(self) -> str:
        return "well-posed" if self.well_posed else "ill-posed"


def reduce(particle: ParticleParams, fields: FieldConfig) -> Couplings:
    """Dimensionless couplings of the effective Hamiltonian."""
    M, alpha = particle.M, particle.alpha
    k, B, hbar = fields.k, fields.B, fields.hbar
    return Couplings(
        a_B=alpha * k * B / hbar,
        a_E=M * alpha * k * k / (hbar * hbar),
        m_eff=M + alpha * B * B,
    )


def channel_coefficient(m: int, c: Couplings) -> float:
    return m * m + 2 * m * c.a_B - c.a_E


def classify_channel(nu_sq: float, tol: float = 0.0) -> ChannelClass:
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if nu_sq < -tol:
        return ChannelClass.SUPERCRITICAL
    if abs(nu_sq) <= tol:
        return ChannelClass.CRITICAL
    return ChannelClass.SUBCRITICAL


def channel(m: int, c: Couplings, tol: float = 0.0) -> Channel:
    nu_sq = channel_coefficient(m, c)
    return Channel(int(m), nu_sq, classify_channel(nu_sq, tol))


def m_scan_bound(c: Couplings) -> int:
    """Integer bound outside which every channel is repulsive."""
    return math.ceil(abs(c.a_B) + math.sqrt(c.a_B * c.a_B + c.a_E)) + 1


def well_posedness(c: Couplings, tol: float = 0.0) -> WellPosednessReport:
    """Scan all channels that can possibly be attractive.

    Critical channels (``nu^2 == 0``) count as admissible.  For consistent
    couplings the verdict coincides with ``a_E == 0``.
    """
    bound = m_scan_bound(c)
    chans = tuple(channel(m, c, tol) for m in range(-bound, bound + 1))
    bad = tuple(ch.m for ch in chans if ch.cls is ChannelClass.SUPERCRITICAL)
    return WellPosednessReport(not bad, bad, bound, chans)


def _position(x) -> tuple[float, float, float]:
    x1, x2 = float(x[0]), float(x[1])
    r2 = x1 * x1 + x2 * x2
    if r2 == 0.0:
        raise ValueError("field is singular at the origin")
    return x1, x2, r2


def electric_field(x, fields: FieldConfig) -> np.ndarray:
    x1, x2, r2 = _position(x)
    return fields.k * np.array([x1, x2]) / r2


def effective_gauge_potential(x, fields: FieldConfig, particle: ParticleParams) -> np.ndarray:
    """``alpha*B*Ebar`` at ``x``; equals ``alpha*B*k*(y, -x)/r^2``."""
    x1, x2, r2 = _position(x)
    s = particle.alpha * fields.B * fields.k / r2
    return np.array([s * x2, -s * x1])


def scalar_potential(r: float, particle: ParticleParams, fields: FieldConfig) -> float:
    """Induced-dipole energy ``-alpha*k^2/(2 r^2)``."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r!r}")
    return -0.5 * particle.alpha * fields.k * fields.k / (r * r)
