"""Composite Nakagami-m x lognormal fading and its single-lognormal approximation.

Powers in dB are converted to natural-log scale with ``XI = 10 / ln 10``.
The Nakagami power is normalised to unit mean, so a transmitter's power
carries all of the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

XI = 10.0 / math.log(10.0)
EULER_GAMMA = 0.57721566490153286060651209
ZETA2 = math.pi**2 / 6.0

# integer arguments up to this bound use exact harmonic sums
_EXACT_LIMIT = 1000
# shift argument above this before using the asymptotic expansions
_ASYMPTOTIC_FROM = 12.0
_TERM_CUTOFF = 1e-14
# Bernoulli numbers B_2, B_4, ..., B_16
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)


@dataclass(frozen=True)
class CompositeFadingParams:
    """Squared envelope = Gamma(m, mean 1) x lognormal shadowing (dB mean/std).

    ``m = inf`` disables multipath fading; with ``sigma_omega_dB = 0`` the
    channel is deterministic.
    """

    m: float = 16.0
    mu_omega_dB: float = 0.0
    sigma_omega_dB: float = 0.0

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami m must be >= 0.5, got {self.m}")
        if not self.sigma_omega_dB >= 0:
            raise ValueError(f"shadowing std must be >= 0, got {self.sigma_omega_dB}")


NO_FADING = CompositeFadingParams(m=math.inf)


@dataclass(frozen=True)
class LognormalParams:
    """Lognormal power law described by the mean and std of ``10 log10 X``."""

    mu_dB: float
    sigma_dB: float

    def __post_init__(self):
        if not self.sigma_dB >= 0:
            raise ValueError(f"sigma_dB must be >= 0, got {self.sigma_dB}")

    @property
    def mu_ln(self) -> float:
        return self.mu_dB / XI

    @property
    def sigma_ln(self) -> float:
        return self.sigma_dB / XI

    @classmethod
    def from_ln(cls, mu_ln: float, sigma_ln: float) -> "LognormalParams":
        return cls(mu_ln * XI, sigma_ln * XI)

    @property
    def mean(self) -> float:
        return lognormal_moment(self, 1)

    @property
    def variance(self) -> float:
        return lognormal_moment(self, 2) - lognormal_moment(self, 1) ** 2


def _check_positive(m: float, name: str) -> float:
    m = float(m)
    if not (m > 0 and math.isfinite(m)):
        raise ValueError(f"{name} requires a positive finite argument, got {m}")
    return m


def _is_small_integer(m: float) -> bool:
    return m.is_integer() and m <= _EXACT_LIMIT


def digamma(m: float) -> float:
    """Euler psi function ``psi(m)`` for ``m > 0``.

    Integers use ``-gamma + H_{m-1}``; other arguments are shifted up by the
    recurrence and finished with the Stirling-type asymptotic series.
    """
    x = _check_positive(m, "digamma")
    if _is_small_integer(x):
        return -EULER_GAMMA + math.fsum(1.0 / k for k in range(1, int(x)))

    shift = 0.0
    while x < _ASYMPTOTIC_FROM:
        shift -= 1.0 / x
        x += 1.0
    terms = [math.log(x), -0.5 / x]
    x2 = x * x
    power = x2
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        term = b / (2 * k * power)
        terms.append(-term)
        if abs(term) < _TERM_CUTOFF:
            break
        power *= x2
    return math.fsum(terms) + shift


def hurwitz_zeta2(m: float) -> float:
    """Hurwitz zeta ``zeta(2, m) = sum_k 1 / (m + k)^2`` for ``m > 0``."""
    x = _check_positive(m, "hurwitz_zeta2")
    if _is_small_integer(x):
        return ZETA2 - math.fsum(1.0 / (k * k) for k in range(1, int(x)))

    head = []
    while x < _ASYMPTOTIC_FROM:
        head.append(1.0 / (x * x))
        x += 1.0
    terms = [1.0 / x, 0.5 / (x * x)]
    x2 = x * x
    power = x2 * x
    for b in _BERNOULLI_EVEN:
        term = b / power
        terms.append(term)
        if abs(term) < _TERM_CUTOFF:
            break
        power *= x2
    return math.fsum(head) + math.fsum(terms)


def composite_to_lognormal(f: CompositeFadingParams) -> LognormalParams:
    """Single-lognormal approximation of the Gamma x lognormal composite."""
    if math.isinf(f.m):
        return LognormalParams(f.mu_omega_dB, f.sigma_omega_dB)
    mu = XI * (digamma(f.m) - math.log(f.m)) + f.mu_omega_dB
    var = XI**2 * hurwitz_zeta2(f.m) + f.sigma_omega_dB**2
    return LognormalParams(mu, math.sqrt(var))


def lognormal_moment(p: LognormalParams, n: int) -> float:
    """Raw moment ``E[X^n] = exp(n mu + n^2 sigma^2 / 2)`` in natural-log units."""
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    return math.exp(n * p.mu_ln + 0.5 * (n * p.sigma_ln) ** 2)


def sample_composite(f: CompositeFadingParams, rng: np.random.Generator, size=None):
    """Draw squared-envelope samples from the exact Gamma x lognormal product."""
    if math.isinf(f.m):
        fast = np.ones(size) if size is not None else 1.0
    else:
        fast = rng.gamma(f.m, 1.0 / f.m, size)
    if f.sigma_omega_dB == 0.0 and f.mu_omega_dB == 0.0:
        return fast
    shadow_dB = rng.normal(f.mu_omega_dB, f.sigma_omega_dB, size)
    return fast * 10.0 ** (shadow_dB / 10.0)


def composite_moment(f: CompositeFadingParams, n: int) -> float:
    """Exact raw moment of the Gamma x lognormal composite (no approximation).

    ``E[G^n] = prod_{k<n} (m + k) / m`` for ``G ~ Gamma(m, 1/m)``.
    """
    gamma_part = 1.0
    if not math.isinf(f.m):
        for k in range(n):
            gamma_part *= (f.m + k) / f.m
    mu, s = f.mu_omega_dB / XI, f.sigma_omega_dB / XI
    return gamma_part * math.exp(n * mu + 0.5 * (n * s) ** 2)
