"""Sampling oracles for the interference and outage analysis.

Fading is drawn from the exact Gamma x lognormal product, never from the
lognormal approximation, so gaps against the analytical path measure the
approximation error as well as any implementation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fdrelay.fading import composite_moment, sample_composite
from fdrelay.interference import AnnulusField, SelfInterference
from fdrelay.link import dbm_to_watts


@dataclass(frozen=True, eq=False)
class Deployment:
    points: np.ndarray  # (k, 2) in metres, receiver at the origin

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    def __len__(self):
        return len(self.points)


def _annulus_radii(field: AnnulusField, size, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(size)
    return np.sqrt(field.r_min**2 + u * (field.r_max**2 - field.r_min**2))


def sample_ppp(field: AnnulusField, rng: np.random.Generator) -> Deployment:
    count = rng.poisson(field.mean_count)
    r = _annulus_radii(field, count, rng)
    theta = rng.uniform(0.0, 2 * np.pi, count)
    return Deployment(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))


def _batch(field: AnnulusField, trials: int, rng: np.random.Generator):
    """Node counts per trial and the path gains ``r^-alpha`` of all nodes."""
    counts = rng.poisson(field.mean_count, trials)
    gains = _annulus_radii(field, int(counts.sum()), rng) ** -field.alpha
    owner = np.repeat(np.arange(trials), counts)
    return owner, gains


def field_samples(field: AnnulusField, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Aggregate interference of one PPP tier, one value per trial."""
    owner, gains = _batch(field, trials, rng)
    fading = sample_composite(field.fading, rng, gains.size)
    return np.bincount(owner, field.tx_power * gains * fading, minlength=trials)


def self_interference_samples(si: SelfInterference, trials: int, rng: np.random.Generator):
    return si.delta * si.tx_power * sample_composite(si.fading, rng, trials)


def empirical_interference(
    field: AnnulusField, trials: int, rng: np.random.Generator, method: str = "direct"
) -> tuple[float, float]:
    """Sample mean and variance of the aggregate interference of a PPP tier.

    ``direct`` draws a fading value per node. ``conditional`` draws only the
    deployments and integrates the fading out with its exact moments
    (law of total variance), which tames the heavy shadowing tail.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if method == "direct":
        total = field_samples(field, trials, rng)
        return float(total.mean()), float(total.var(ddof=1)) if trials > 1 else 0.0
    if method != "conditional":
        raise ValueError(f"unknown method {method!r}")
    owner, gains = _batch(field, trials, rng)
    m1 = composite_moment(field.fading, 1)
    m2 = composite_moment(field.fading, 2)
    p = field.tx_power
    s1 = np.bincount(owner, gains, minlength=trials)
    s2 = np.bincount(owner, gains * gains, minlength=trials)
    cond_mean = p * m1 * s1
    cond_var = p * p * (m2 - m1 * m1) * s2
    var_of_mean = float(cond_mean.var(ddof=1)) if trials > 1 else 0.0
    return float(cond_mean.mean()), float(cond_var.mean()) + var_of_mean


def interference_samples(cfg, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Total interference at a tagged receiver of ``cfg`` (HD: BS tier; FD: + UE tier + SI)."""
    total = field_samples(cfg.bs_field(), trials, rng)
    if cfg.duplex == "FD":
        total = total + field_samples(cfg.ue_field(), trials, rng)
        total = total + self_interference_samples(cfg.self_interference(), trials, rng)
    return total


def desired_samples(cfg, trials: int, rng: np.random.Generator, link: str = "sd") -> np.ndarray:
    """Received power of the source at the destination (``sd``) or relay (``sr``)."""
    p = dbm_to_watts(cfg.source_power_dBm)
    if link == "sd":
        r = np.full(trials, cfg.sd_distance_m)
    elif link == "sr" and cfg.strategy == "fixed":
        r = np.full(trials, cfg.relay_distance_m)
    elif link == "sr":
        r = _annulus_radii(cfg.forwarding_field(), trials, rng)
    else:
        raise ValueError(f"link must be 'sd' or 'sr', got {link!r}")
    return p * r ** -cfg.alpha * sample_composite(cfg.link_fading(), rng, trials)


def empirical_sir_dB(cfg, trials: int, rng: np.random.Generator, link: str = "sd") -> np.ndarray:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    signal = desired_samples(cfg, trials, rng, link)
    noise = interference_samples(cfg, trials, rng)
    with np.errstate(divide="ignore"):
        return 10 * np.log10(signal) - 10 * np.log10(noise)


def empirical_outage(
    cfg, gamma_th_dB: float, trials: int, rng: np.random.Generator, link: str = "sd"
) -> float:
    """Fraction of trials with SIR below ``gamma_th_dB``."""
    return float(np.mean(empirical_sir_dB(cfg, trials, rng, link) < gamma_th_dB))
