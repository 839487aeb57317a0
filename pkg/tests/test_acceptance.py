"""Exit criteria, one test per criterion, each at its pinned tolerance and time budget."""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.special import jn_zeros

from dipolelab.bessel import bessel_zero
from dipolelab.classical import (
    Outcome,
    TrajectoryState,
    capture_criterion,
    eom_rhs,
    hamiltonian_value,
    integrate,
)
from dipolelab.core import Couplings, FieldConfig, ParticleParams, channel_coefficient, reduce, well_posedness
from dipolelab.phase import LoopPath, loop_holonomy, mass_renormalization_check
from dipolelab.radial import (
    RadialProblem,
    cutoff_scaling_probe,
    dirichlet_spectrum,
    loglog_slope,
    regularized_bound_spectrum,
)

pytestmark = pytest.mark.acceptance

DATA = Path(__file__).parent / "data"
SEED = 20251016


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_ac01_central_claim(criterion):
    rng = np.random.default_rng(SEED)
    with Timer() as t:
        ill = 0
        for _ in range(1000):
            p = ParticleParams(rng.uniform(0.1, 10), rng.uniform(0.01, 2))
            f = FieldConfig(rng.uniform(0.01, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2))
            c = reduce(p, f)
            assert c.a_E > 0
            rep = well_posedness(c)
            ill += (not rep.well_posed) and 0 in rep.violating_m
        well = 0
        for _ in range(1000):
            p = ParticleParams(rng.uniform(0.1, 10), rng.uniform(0.01, 2))
            f = FieldConfig(0.0, rng.uniform(-2, 2), rng.uniform(0.5, 2))
            well += well_posedness(reduce(p, f)).well_posed
    ok = ill == 1000 and well == 1000 and t.elapsed < 1.0
    assert criterion(ok, f"ill-posed {ill}/1000 with a_E>0, well-posed {well}/1000 with k=0, {t.elapsed:.2f}s < 1s")


def test_ac02_channel_identity(criterion):
    rng = np.random.default_rng(SEED + 2)
    # dyadic couplings and bounded m keep every operation exact in binary64
    ms = rng.integers(-1000, 1001, 100_000).tolist()
    abs_ = (rng.integers(-(2**20), 2**20 + 1, 100_000) / 2**10).tolist()
    aes = (rng.integers(0, 2**20 + 1, 100_000) / 2**10).tolist()
    with Timer() as t:
        bad = 0
        for m, aB, aE in zip(ms, abs_, aes):
            c = Couplings(aB, aE)
            bad += channel_coefficient(m, c) - channel_coefficient(-m, c) != 4 * m * aB
    ok = bad == 0 and t.elapsed < 1.0
    assert criterion(ok, f"{bad} inexact of 100000, {t.elapsed:.2f}s < 1s")


def test_ac03_mass_renormalization(criterion):
    particle, fields = ParticleParams(1.0, 1.0), FieldConfig(0.0, 2.0)
    with Timer() as t:
        coarse = mass_renormalization_check(particle, fields, 1.0, 3, (0, 1, 2), n_points=4000)
        fine = mass_renormalization_check(particle, fields, 1.0, 3, (0, 1, 2), n_points=8000)
    ratios = []
    for m in (0, 1, 2):
        e1 = np.abs(coarse.energies[m] / coarse.expected[m] - 1)
        e2 = np.abs(fine.energies[m] / fine.expected[m] - 1)
        ratios.extend(e1 / e2)
    ok = coarse.max_rel_error <= 5e-3 and min(ratios) >= 3.5 and t.elapsed < 30
    assert criterion(
        ok,
        f"max rel err {coarse.max_rel_error:.2e} <= 5e-3, min shrink on doubling {min(ratios):.2f} >= 3.5, "
        f"{t.elapsed:.2f}s < 30s",
    )


def test_ac04_oracle_equivalence(criterion):
    worst = 0.0
    with Timer() as t:
        for m in (0, 1, 2):
            res = dirichlet_spectrum(RadialProblem(float(m * m), 0.0, 1.0, 4000), 3)
            ref = np.array([bessel_zero(m, n) ** 2 for n in (1, 2, 3)])
            worst = max(worst, float(np.max(np.abs(res.eigenvalues / ref - 1))))
            assert np.allclose(ref, jn_zeros(m, 3) ** 2, rtol=1e-12)
    ok = worst <= 5e-3 and t.elapsed < 30
    assert criterion(ok, f"max rel err {worst:.2e} <= 5e-3 for nu^2 in {{0,1,4}}, {t.elapsed:.2f}s < 30s")


def test_ac05_geometric_tower(criterion):
    with Timer() as t:
        res = regularized_bound_spectrum(2.0, RadialProblem(-4.0, 1.0, 1e6, 4000, "logarithmic"))
    target = math.exp(-math.pi)
    ratios = res.eigenvalues[1:] / res.eigenvalues[:-1]
    within = np.abs(ratios / target - 1) <= 0.10
    best_run = run = 0
    for flag in within:
        run = run + 1 if flag else 0
        best_run = max(best_run, run)
    ok = best_run >= 2 and t.elapsed < 60
    shown = ", ".join(f"{r:.5f}" for r in ratios)
    assert criterion(ok, f"ratios [{shown}] vs e^-pi={target:.5f}, {best_run} successive within 10%, {t.elapsed:.2f}s")


def test_ac06_cutoff_divergence(criterion):
    with Timer() as t:
        probe = cutoff_scaling_probe(2.0, [1.0, 0.5, 0.25], 1e5)
    slope = loglog_slope(probe)
    ok = abs(slope + 2.0) <= 0.1 and t.elapsed < 60
    assert criterion(ok, f"log-log slope {slope:.6f} = -2 +- 0.1, {t.elapsed:.2f}s < 60s")


def test_ac07_holonomy(criterion):
    particle, fields = ParticleParams(1.0, 0.25), FieldConfig(1.0, 1.0)
    expected = -2 * math.pi * reduce(particle, fields).a_B
    with Timer() as t:
        once = [
            loop_holonomy(p, particle, fields)
            for p in (LoopPath.circle(), LoopPath.ellipse(semi_axes=(1.0, 3.0)), LoopPath.square(side=4.0))
        ]
        zero = [
            loop_holonomy(p, particle, fields)
            for p in (
                LoopPath.square(center=(5.0, 0.0), side=1.0),
                LoopPath.circle(center=(0.0, -3.0), radius=2.0),
                LoopPath.ellipse(center=(-4.0, 4.0), semi_axes=(1.0, 3.0)),
            )
        ]
    err1 = max(abs(r.phase - expected) for r in once)
    err0 = max(abs(r.phase) for r in zero)
    ok = (
        all(r.winding == 1 for r in once)
        and all(r.winding == 0 for r in zero)
        and err1 <= 1e-8
        and err0 <= 1e-9
        and t.elapsed < 1.0
    )
    assert criterion(ok, f"winding-1 err {err1:.1e} <= 1e-8, winding-0 |phase| {err0:.1e} <= 1e-9, {t.elapsed:.2f}s")


def _non_capturing(rng, particle, fields):
    m_eff = particle.M + particle.alpha * fields.B**2
    while True:
        x = rng.normal(size=2)
        x *= rng.uniform(0.5, 2.0) / np.linalg.norm(x)
        p = rng.normal(size=2)
        lmech = x[0] * p[1] - x[1] * p[0] - particle.alpha * fields.B * fields.k
        if lmech**2 > 1.2 * m_eff * particle.alpha * fields.k**2:
            return TrajectoryState(x, p)


def test_ac08_classical_conservation(criterion):
    rng = np.random.default_rng(SEED + 8)
    worst_e = worst_l = 0.0
    captured = 0
    with Timer() as t:
        for _ in range(20):
            particle = ParticleParams(rng.uniform(0.5, 2.0), rng.uniform(0.1, 2.0))
            fields = FieldConfig(rng.uniform(0.1, 2.0), rng.uniform(-2.0, 2.0))
            tr = integrate(_non_capturing(rng, particle, fields), 1e4, 1e-10, particle, fields)
            captured += tr.outcome is Outcome.CAPTURED
            worst_e = max(worst_e, tr.energy_drift)
            worst_l = max(worst_l, tr.p_theta_drift)
    ok = captured == 0 and worst_e <= 1e-8 and worst_l <= 1e-8 and t.elapsed < 60
    assert criterion(ok, f"max drift H {worst_e:.1e}, p_theta {worst_l:.1e} <= 1e-8 over 1e4, {t.elapsed:.2f}s")


def test_ac09_classical_capture(criterion):
    rng = np.random.default_rng(SEED + 9)
    particle, fields = ParticleParams(1.0, 1.0), FieldConfig(1.0, 0.0)
    agree = total = 0
    with Timer() as t:
        while total < 20:
            pt = rng.uniform(0.5, 1.5)
            if abs(pt * pt - 1.0) < 0.05:
                continue
            tr = integrate(TrajectoryState([1.0, 0.0], [0.0, pt]), 100.0, 1e-10, particle, fields)
            agree += capture_criterion(pt, particle, fields).captured_predicted == (tr.outcome is Outcome.CAPTURED)
            total += 1
    ok = agree == 20 and t.elapsed < 60
    assert criterion(ok, f"agreement {agree}/20, {t.elapsed:.2f}s < 60s")


def test_ac10_gradient_check(criterion):
    rng = np.random.default_rng(SEED + 10)
    worst = 0.0
    with Timer() as t:
        for _ in range(100):
            particle = ParticleParams(rng.uniform(0.5, 2.0), rng.uniform(0.1, 2.0))
            fields = FieldConfig(rng.uniform(0.1, 2.0), rng.uniform(-2.0, 2.0))
            x = rng.normal(size=2)
            x *= rng.uniform(0.3, 3.0) / np.linalg.norm(x)
            s = TrajectoryState(x, rng.normal(size=2))
            dx, dp = eom_rhs(s, particle, fields)
            z = np.concatenate([s.x, s.p])
            g = np.empty(4)
            for i in range(4):
                h = 1e-6 * max(1.0, abs(z[i]))
                up, dn = z.copy(), z.copy()
                up[i] += h
                dn[i] -= h
                g[i] = (
                    hamiltonian_value(TrajectoryState(up[:2], up[2:]), particle, fields)
                    - hamiltonian_value(TrajectoryState(dn[:2], dn[2:]), particle, fields)
                ) / (2 * h)
            analytic = np.concatenate([-dp, dx])
            worst = max(worst, float(np.linalg.norm(analytic - g) / np.linalg.norm(analytic)))
    ok = worst <= 1e-6 and t.elapsed < 1.0
    assert criterion(ok, f"max relative gradient mismatch {worst:.1e} <= 1e-6, {t.elapsed:.2f}s < 1s")


def test_ac11_cli_determinism(criterion):
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "dipolelab.cli", *args], capture_output=True)

    with Timer() as t:
        first = cli("sweep", "--config", str(DATA / "sweep.json"))
        second = cli("sweep", "--config", str(DATA / "sweep.json"), "--threads", "4")
        codes = [cli("channels", "--config", str(DATA / name)).returncode for name in ("k0.json", "kpos.json", "malformed.json")]
    same = first.returncode == 0 and first.stdout == second.stdout and len(first.stdout) > 0
    ok = same and codes == [0, 2, 1] and t.elapsed < 5.0
    assert criterion(ok, f"byte-identical sweeps: {same}, exit codes (k=0, k>0, malformed) {codes} == [0, 2, 1], {t.elapsed:.2f}s")
