import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdrelay.fading import (
    XI,
    CompositeFadingParams,
    LognormalParams,
    composite_moment,
    composite_to_lognormal,
    digamma,
    hurwitz_zeta2,
    lognormal_moment,
    sample_composite,
)

# Euler-Maclaurin on H_n - ln n at n = 1e4
EULER_GAMMA_ORACLE = 0.5772156649015316


def test_xi_is_db_to_neper():
    assert XI == pytest.approx(10 / math.log(10), rel=1e-15)


@pytest.mark.parametrize("m, expected", [(1, -EULER_GAMMA_ORACLE), (2, 1 - EULER_GAMMA_ORACLE)])
def test_digamma_integer_values(m, expected):
    assert digamma(m) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize(
    "m, expected", [(1, math.pi**2 / 6), (2, math.pi**2 / 6 - 1)]
)
def test_hurwitz_integer_values(m, expected):
    assert hurwitz_zeta2(m) == pytest.approx(expected, abs=1e-9)


# values from brute-force sums with Euler-Maclaurin tails (2e4 terms)
@pytest.mark.parametrize(
    "m, psi, zeta",
    [
        (0.5, -1.9635100260214013, 4.934802200544679),
        (2.5, 0.7031566406451819, 0.49035775610023485),
        (16, 2.741013328326838, 0.06449378340323937),
    ],
)
def test_special_functions_against_brute_force(m, psi, zeta):
    assert digamma(m) == pytest.approx(psi, abs=1e-10)
    assert hurwitz_zeta2(m) == pytest.approx(zeta, abs=1e-10)


@pytest.mark.parametrize("m", range(1, 65))
def test_recurrences_on_integers(m):
    assert digamma(m + 1) - digamma(m) == pytest.approx(1 / m, abs=1e-10)
    assert hurwitz_zeta2(m) - hurwitz_zeta2(m + 1) == pytest.approx(1 / m**2, abs=1e-10)


@given(st.floats(min_value=1e-3, max_value=1e4))
def test_recurrences_on_reals(m):
    assert digamma(m + 1) - digamma(m) == pytest.approx(1 / m, rel=1e-10, abs=1e-10)
    assert hurwitz_zeta2(m) - hurwitz_zeta2(m + 1) == pytest.approx(1 / m**2, rel=1e-9, abs=1e-12)


def test_against_scipy():
    from scipy.special import psi, zeta

    for m in np.linspace(0.05, 40.3, 97):
        assert digamma(m) == pytest.approx(psi(m), rel=1e-12, abs=1e-12)
        assert hurwitz_zeta2(m) == pytest.approx(zeta(2, m), rel=1e-12)


@pytest.mark.parametrize("bad", [0, -1, -0.5, math.nan, math.inf])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        digamma(bad)
    with pytest.raises(ValueError):
        hurwitz_zeta2(bad)


def test_composite_unit_rayleigh():
    ln = composite_to_lognormal(CompositeFadingParams(1, 0, 0))
    assert ln.mu_dB == pytest.approx(-2.5068, abs=1e-3)
    assert ln.sigma_dB == pytest.approx(5.5699, abs=1e-3)


def test_composite_default_setting():
    ln = composite_to_lognormal(CompositeFadingParams(16, 0, 10))
    assert ln.mu_dB == pytest.approx(-0.137, abs=1e-2)
    assert ln.sigma_dB == pytest.approx(10.06, abs=1e-2)


def test_composite_without_multipath():
    ln = composite_to_lognormal(CompositeFadingParams(1e9, 3.0, 7.0))
    assert ln.mu_dB == pytest.approx(3.0, abs=1e-7)
    assert ln.sigma_dB == pytest.approx(7.0, abs=1e-6)
    assert composite_to_lognormal(CompositeFadingParams(math.inf, 3.0, 7.0)) == LognormalParams(3.0, 7.0)


@given(st.floats(0.5, 100), st.floats(0, 20), st.floats(0.01, 5))
def test_composite_monotone(m, sigma, bump):
    base = composite_to_lognormal(CompositeFadingParams(m, 0, sigma)).sigma_dB
    assert composite_to_lognormal(CompositeFadingParams(m, 0, sigma + bump)).sigma_dB > base
    assert composite_to_lognormal(CompositeFadingParams(m + bump, 0, sigma)).sigma_dB < base


def test_invalid_params():
    with pytest.raises(ValueError):
        CompositeFadingParams(0.3)
    with pytest.raises(ValueError):
        CompositeFadingParams(2, 0, -1)
    with pytest.raises(ValueError):
        LognormalParams(0, -1)


def test_lognormal_moments():
    assert lognormal_moment(LognormalParams(0, 0), 3) == 1.0
    unit = LognormalParams.from_ln(0, 1)
    assert lognormal_moment(unit, 1) == pytest.approx(math.exp(0.5), rel=1e-12)
    assert lognormal_moment(unit, 2) == pytest.approx(math.exp(2), rel=1e-12)


def test_lognormal_moments_by_sampling(rng):
    x = np.exp(rng.normal(0.0, 1.0, 10_000_000))
    unit = LognormalParams.from_ln(0, 1)
    assert x.mean() == pytest.approx(lognormal_moment(unit, 1), rel=0.01)
    assert (x**2).mean() == pytest.approx(lognormal_moment(unit, 2), rel=0.01)


@given(st.floats(-50, 50), st.floats(0, 20))
def test_lognormal_log_convex(mu, sigma):
    p = LognormalParams(mu, sigma)
    assert lognormal_moment(p, 2) * lognormal_moment(p, 0) >= lognormal_moment(p, 1) ** 2 * (1 - 1e-12)


def test_sample_concentrates_without_fading(rng):
    x = sample_composite(CompositeFadingParams(1e8), rng, 100_000)
    assert x.var() < 1e-6
    assert x.mean() == pytest.approx(1, abs=1e-3)


def test_sample_rayleigh_power_mean(rng):
    n = 1_000_000
    x = sample_composite(CompositeFadingParams(1), rng, n)
    # Exp(1): std error 1/sqrt(n)
    assert abs(x.mean() - 1) < 3 / math.sqrt(n)


def test_sample_matches_lognormal_approximation_in_log_domain(rng):
    f = CompositeFadingParams(16, 0, 10)
    x_dB = 10 * np.log10(sample_composite(f, rng, 1_000_000))
    ln = composite_to_lognormal(f)
    assert x_dB.mean() == pytest.approx(ln.mu_dB, abs=0.02 * ln.sigma_dB)
    assert x_dB.std() == pytest.approx(ln.sigma_dB, rel=0.02)


def test_composite_moment_exact(rng):
    f = CompositeFadingParams(4, 0, 3)
    x = sample_composite(f, rng, 2_000_000)
    assert x.mean() == pytest.approx(composite_moment(f, 1), rel=0.01)
    assert (x**2).mean() == pytest.approx(composite_moment(f, 2), rel=0.02)
