import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdrelay.fading import NO_FADING, CompositeFadingParams, LognormalParams
from fdrelay.interference import AnnulusField, single_tx_cumulants
from fdrelay.link import (
    LinkBudget,
    SirDistribution,
    fixed_link_power,
    outage_probability,
    q_function,
    random_link_power,
    sir_distribution,
    success_probability,
)


def test_unit_link():
    p = fixed_link_power(LinkBudget(30.0, 1.0, 3.0, NO_FADING))
    assert (p.mu_dB, p.sigma_dB) == (0.0, 0.0)


def test_path_loss_at_50m():
    p = fixed_link_power(LinkBudget(30.0, 50.0, 3.0, NO_FADING))
    assert p.mu_dB == pytest.approx(-50.969, abs=1e-3)


def test_shadowing_only_widens():
    p = fixed_link_power(LinkBudget(30.0, 50.0, 3.0, CompositeFadingParams(math.inf, 0, 10)))
    assert p.mu_dB == pytest.approx(-30 * math.log10(50), abs=1e-12)
    assert p.sigma_dB == 10


def test_random_link_collapses_to_fixed():
    d = 40.0
    f = AnnulusField(0.0, d * (1 - 1e-6), d, 3.0, 1.0, NO_FADING)
    ran = random_link_power(f)
    fixed = fixed_link_power(LinkBudget(30.0, d, 3.0, NO_FADING))
    assert ran.mu_dB == pytest.approx(fixed.mu_dB, abs=1e-3)
    assert ran.sigma_dB == pytest.approx(0.0, abs=1e-3)


def test_random_link_composes_cumulants():
    f = AnnulusField(0.0, 25.0, 500.0, 3.0, 1.0, NO_FADING)
    k1, k2 = single_tx_cumulants(f).kappa
    assert random_link_power(f).mu_ln == pytest.approx(
        math.log(k1**2 / math.sqrt(k1**2 + k2)), rel=1e-12
    )


def test_random_link_weakens_as_annulus_widens():
    mus = [random_link_power(AnnulusField(0.0, 1.0, r, 3.0)).mu_dB for r in (10, 20, 50, 100, 200)]
    assert all(b < a for a, b in zip(mus, mus[1:]))


def test_q_function_values():
    assert q_function(0) == 0.5
    assert q_function(1.28155) == pytest.approx(0.1, abs=1e-5)
    from scipy.stats import norm

    for x in np.linspace(-8, 8, 33):
        assert q_function(x) == pytest.approx(norm.sf(x), rel=1e-12, abs=1e-300)


@given(st.floats(-30, 30))
def test_q_function_reflection(x):
    assert q_function(-x) == pytest.approx(1 - q_function(x), abs=1e-15)


def test_sir_examples():
    a = LognormalParams(7.0, 2.0)
    assert sir_distribution(a, a).mu_dB == 0.0
    s = sir_distribution(LognormalParams(10, 3), LognormalParams(0, 4))
    assert (s.mu_dB, s.sigma_dB) == (10, 5)


def test_sir_by_sampling(rng):
    d, i = LognormalParams(-50.0, 8.0), LognormalParams(-55.0, 6.0)
    n = 1_000_000
    sd = rng.normal(d.mu_dB, d.sigma_dB, n) - rng.normal(i.mu_dB, i.sigma_dB, n)
    s = sir_distribution(d, i)
    assert sd.mean() == pytest.approx(s.mu_dB, rel=0.02)
    assert sd.std() == pytest.approx(s.sigma_dB, rel=0.02)


@given(st.floats(-40, 40), st.floats(0, 20), st.floats(0, 20))
def test_sir_variance_dominates_inputs(mu, s1, s2):
    s = sir_distribution(LognormalParams(mu, s1), LognormalParams(0, s2))
    assert s.sigma_dB >= max(s1, s2) * (1 - 1e-15)


def test_outage_examples():
    assert outage_probability(SirDistribution(3.0, 2.0), 3.0) == 0.5
    assert outage_probability(SirDistribution(1.28155, 1.0), 0.0) == pytest.approx(0.1, abs=1e-5)
    s = SirDistribution(3.0, 4.0)
    assert outage_probability(s, -1e6) == 0.0
    assert outage_probability(s, 1e6) == 1.0


def test_outage_deterministic_sir():
    s = SirDistribution(2.0, 0.0)
    assert [outage_probability(s, g) for g in (1.0, 2.0, 3.0)] == [0.0, 0.5, 1.0]


@given(st.floats(-50, 50), st.floats(0, 30), st.floats(-60, 60), st.floats(0, 10))
def test_outage_monotone_and_complementary(mu, sigma, gamma, bump):
    s = SirDistribution(mu, sigma)
    o = outage_probability(s, gamma)
    assert 0.0 <= o <= 1.0
    assert o + success_probability(s, gamma) == 1.0
    assert outage_probability(s, gamma + bump) >= o
    # stronger desired signal / weaker interference means a larger SIR mean
    assert outage_probability(SirDistribution(mu + bump, sigma), gamma) <= o
