import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dipolelab.core import (
    ChannelClass,
    Couplings,
    FieldConfig,
    ParticleParams,
    channel_coefficient,
    classify_channel,
    effective_gauge_potential,
    electric_field,
    m_scan_bound,
    reduce,
    scalar_potential,
    well_posedness,
)

positive = st.floats(1e-3, 1e3)


def test_reduce_examples():
    c = reduce(ParticleParams(1, 0.5), FieldConfig(2, 3, 1))
    assert (c.a_B, c.a_E, c.m_eff) == (3.0, 2.0, 5.5)
    c = reduce(ParticleParams(1, 1), FieldConfig(0, 7, 1))
    assert (c.a_B, c.a_E, c.m_eff) == (0.0, 0.0, 50.0)


def test_reduce_identity_example():
    c = reduce(ParticleParams(2, 0.1), FieldConfig(1, 4, 1))
    assert c.a_B == pytest.approx(0.4, rel=1e-15)
    assert c.a_E == pytest.approx(0.2, rel=1e-15)
    lhs = c.a_B**2
    rhs = c.a_E * (0.1 * 16 / 2)
    assert lhs == pytest.approx(0.16, rel=1e-14)
    assert rhs == pytest.approx(0.16, rel=1e-14)


@pytest.mark.parametrize(
    "make",
    [
        lambda: ParticleParams(0, 1),
        lambda: ParticleParams(-1, 1),
        lambda: ParticleParams(1, -0.1),
        lambda: FieldConfig(1, 1, 0),
        lambda: FieldConfig(1, 1, -1),
        lambda: FieldConfig(-1, 1, 1),
        lambda: Couplings(0.1, -0.1),
    ],
)
def test_invalid_inputs_rejected(make):
    with pytest.raises(ValueError):
        make()


def test_negative_k_normalized():
    f = FieldConfig.normalized(-2.0, 3.0)
    assert (f.k, f.B) == (2.0, -3.0)
    p = ParticleParams(1.3, 0.7)
    a = reduce(p, f)
    # only k^2 and k*B enter, and both are preserved
    assert a.a_E == reduce(p, FieldConfig(2.0, 3.0)).a_E
    assert a.a_B == pytest.approx(0.7 * -2.0 * 3.0, rel=1e-15)


# zero or well away from underflow, so a_E = 0 only when alpha*k = 0
@given(
    M=positive,
    alpha=st.one_of(st.just(0.0), positive),
    k=st.one_of(st.just(0.0), positive),
    B=st.floats(-1e3, 1e3),
    hbar=positive,
)
@settings(max_examples=300)
def test_coupling_identity(M, alpha, k, B, hbar):
    c = reduce(ParticleParams(M, alpha), FieldConfig(k, B, hbar))
    lhs = c.a_B**2
    rhs = c.a_E * (alpha * B * B / M)
    assert math.isclose(lhs, rhs, rel_tol=1e-14, abs_tol=1e-300)
    assert c.a_E >= 0 and c.m_eff >= M
    assert c.consistent


@pytest.mark.parametrize(
    "m, aB, aE, expected",
    [(0, 0.7, 0.3, -0.3), (2, 0.0, 0.0, 4.0), (-1, 0.3, 0.1, 0.3)],
)
def test_channel_coefficient(m, aB, aE, expected):
    assert channel_coefficient(m, Couplings(aB, aE)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "nu_sq, tol, cls",
    [
        (-0.3, 0.0, ChannelClass.SUPERCRITICAL),
        (0.0, 0.0, ChannelClass.CRITICAL),
        (1.75, 0.0, ChannelClass.SUBCRITICAL),
        (-1e-12, 1e-9, ChannelClass.CRITICAL),
        (1e-12, 1e-9, ChannelClass.CRITICAL),
        (-1e-12, 0.0, ChannelClass.SUPERCRITICAL),
    ],
)
def test_classify(nu_sq, tol, cls):
    assert classify_channel(nu_sq, tol) is cls


def test_well_posedness_examples():
    rep = well_posedness(Couplings(0.0, 0.0))
    assert rep.well_posed and rep.violating_m == ()
    rep = well_posedness(Couplings(0.7, 1e-9))
    assert not rep.well_posed and 0 in rep.violating_m
    # nu^2(-1) = 1 - 1.4 - 1e-9 is negative as well
    assert rep.violating_m == (-1, 0)
    rep = well_posedness(Couplings(0.25, 0.1))
    assert rep.violating_m == (0,)
    rep = well_posedness(Couplings(2.0, 1.0))
    assert rep.violating_m == (-4, -3, -2, -1, 0)


def test_well_posedness_enumeration_oracle():
    # brute-force enumeration over a much wider window than the scan bound
    c = Couplings(2.0, 1.0)
    brute = [m for m in range(-1000, 1001) if m * m + 4 * m - 1 < 0]
    assert list(well_posedness(c).violating_m) == brute


@given(aB=st.floats(-50, 50), aE=st.floats(0, 100), delta=st.integers(1, 20))
@settings(max_examples=300)
def test_scan_completeness(aB, aE, delta):
    c = Couplings(aB, aE)
    bound = m_scan_bound(c)
    for m in (bound + delta, -bound - delta):
        assert channel_coefficient(m, c) > 0


@given(aB=st.floats(-50, 50), aE=st.floats(0, 100))
@settings(max_examples=300)
def test_central_claim_closed_form(aB, aE):
    c = Couplings(aB if aE > 0 else 0.0, aE)
    rep = well_posedness(c)
    assert rep.well_posed == (aE == 0)
    if aE > 0:
        assert 0 in rep.violating_m
        assert channel_coefficient(0, c) == -aE


@given(m=st.integers(-1000, 1000), aB=st.integers(-2**20, 2**20), aE=st.integers(0, 2**20))
def test_channel_asymmetry_exact(m, aB, aE):
    c = Couplings(aB / 2**10, aE / 2**10)
    assert channel_coefficient(m, c) - channel_coefficient(-m, c) == 4 * m * c.a_B


def test_inconsistent_couplings_flagged():
    assert not Couplings(0.25, 0.0).consistent
    assert Couplings(0.25, 0.1).consistent
    assert Couplings(0.0, 0.0).consistent


def test_gauge_potential_examples():
    p, f = ParticleParams(1, 1), FieldConfig(1, 1)
    np.testing.assert_allclose(effective_gauge_potential((1, 0), f, p), (0, -1), atol=1e-15)
    np.testing.assert_allclose(effective_gauge_potential((0, 2), f, p), (0.5, 0), atol=1e-15)
    with pytest.raises(ValueError):
        effective_gauge_potential((0, 0), f, p)


def test_gauge_potential_geometry(rng):
    p, f = ParticleParams(1.3, 0.8), FieldConfig(1.7, -2.1)
    for _ in range(200):
        x = rng.normal(size=2) * rng.uniform(0.01, 10)
        a = effective_gauge_potential(x, f, p)
        e = electric_field(x, f)
        r = np.hypot(*x)
        assert abs(a @ e) <= 1e-13 * np.linalg.norm(a) * np.linalg.norm(e)
        assert np.linalg.norm(a) == pytest.approx(abs(0.8 * -2.1 * 1.7) / r, rel=1e-13)


def test_scalar_potential():
    p, f = ParticleParams(1, 1), FieldConfig(1, 0)
    assert scalar_potential(1, p, f) == -0.5
    assert scalar_potential(2, p, f) == -0.125
    vals = [scalar_potential(r, p, f) for r in np.geomspace(1, 1e8, 50)]
    assert all(v < 0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > -1e-15
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            scalar_potential(bad, p, f)
