"""Desired-link power, SIR law and outage probability.

Received powers are lognormal and reported in dBW. Thermal noise is not
modelled; links are interference limited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from fdrelay.fading import CompositeFadingParams, LognormalParams, composite_to_lognormal
from fdrelay.interference import AnnulusField, cumulants_to_lognormal, single_tx_cumulants


def dbm_to_watts(p_dBm: float) -> float:
    return 10.0 ** ((p_dBm - 30.0) / 10.0)


def watts_to_dbm(p_W: float) -> float:
    return 10.0 * math.log10(p_W) + 30.0


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dBm: float
    distance_m: float
    alpha: float = 3.0
    fading: CompositeFadingParams = field(default_factory=CompositeFadingParams)

    def __post_init__(self):
        if not self.distance_m > 0:
            raise ValueError(f"distance must be > 0, got {self.distance_m}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")


@dataclass(frozen=True)
class SirDistribution:
    """SIR in dB is Normal(mu_dB, sigma_dB^2)."""

    mu_dB: float
    sigma_dB: float

    def __post_init__(self):
        if not self.sigma_dB >= 0:
            raise ValueError(f"sigma_dB must be >= 0, got {self.sigma_dB}")


def fixed_link_power(lb: LinkBudget) -> LognormalParams:
    """Received power ``p d^-alpha x`` at a deterministic distance, in dBW."""
    x = composite_to_lognormal(lb.fading)
    mu = lb.tx_power_dBm - 30.0 - 10.0 * lb.alpha * math.log10(lb.distance_m) + x.mu_dB
    return LognormalParams(mu, x.sigma_dB)


def random_link_power(field: AnnulusField) -> LognormalParams:
    """Received power from a transmitter placed uniformly in ``field``'s annulus."""
    return cumulants_to_lognormal(single_tx_cumulants(field, 2))


def q_function(x: float) -> float:
    """Standard normal tail ``Pr[N(0,1) > x]``."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def sir_distribution(desired: LognormalParams, interference: LognormalParams) -> SirDistribution:
    return SirDistribution(
        desired.mu_dB - interference.mu_dB,
        math.hypot(desired.sigma_dB, interference.sigma_dB),
    )


def outage_probability(sir: SirDistribution, gamma_th_dB: float) -> float:
    """``Pr[SIR < gamma_th]``; a step function when the SIR is deterministic."""
    if sir.sigma_dB == 0:
        if sir.mu_dB > gamma_th_dB:
            return 0.0
        if sir.mu_dB < gamma_th_dB:
            return 1.0
        return 0.5
    return q_function((sir.mu_dB - gamma_th_dB) / sir.sigma_dB)


def success_probability(sir: SirDistribution, gamma_th_dB: float) -> float:
    return 1.0 - outage_probability(sir, gamma_th_dB)
