"""Cumulants of received power and aggregate co-channel interference.

Everything is in linear watts. Cumulants of independent tiers add, which is
how the full-duplex aggregate (BS tier + UE tier + self-interference) is
assembled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

from fdrelay.fading import (
    CompositeFadingParams,
    LognormalParams,
    composite_to_lognormal,
    lognormal_moment,
)

# relative roundoff allowed on kappa_2 before it counts as negative
_KAPPA2_SLACK = 1e-9


@dataclass(frozen=True)
class CumulantVector:
    kappa: tuple[float, ...]

    def __post_init__(self):
        kappa = tuple(float(k) for k in self.kappa)
        if len(kappa) < 2:
            raise ValueError("a cumulant vector needs at least kappa_1 and kappa_2")
        if kappa[1] < 0:
            if kappa[1] < -_KAPPA2_SLACK * kappa[0] ** 2:
                raise ValueError(f"negative variance kappa_2={kappa[1]}")
            kappa = (kappa[0], 0.0) + kappa[2:]
        object.__setattr__(self, "kappa", kappa)

    def __len__(self):
        return len(self.kappa)

    def __getitem__(self, n):
        return self.kappa[n]

    def __add__(self, other: "CumulantVector") -> "CumulantVector":
        return add_cumulants(self, other)

    @property
    def mean(self) -> float:
        return self.kappa[0]

    @property
    def variance(self) -> float:
        return self.kappa[1]

    @classmethod
    def zeros(cls, n_max: int = 2) -> "CumulantVector":
        return cls((0.0,) * n_max)


@dataclass(frozen=True)
class AnnulusField:
    """Transmitters spread over ``r_min <= r <= r_max`` around the receiver.

    ``density`` is the PPP intensity in nodes/m^2. It is ignored when the
    annulus only describes where a single random transmitter may sit.
    """

    density: float = 5e-5
    r_min: float = 25.0
    r_max: float = 500.0
    alpha: float = 3.0
    tx_power: float = 1.0
    fading: CompositeFadingParams = field(default_factory=CompositeFadingParams)

    def __post_init__(self):
        if not 0 < self.r_min:
            raise ValueError(f"r_min must be > 0, got {self.r_min}")
        if not self.r_min < self.r_max:
            raise ValueError(f"degenerate annulus: r_min={self.r_min} >= r_max={self.r_max}")
        if not self.alpha > 2:
            raise ValueError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if not self.density >= 0:
            raise ValueError(f"density must be >= 0, got {self.density}")
        if not self.tx_power > 0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")

    @property
    def area(self) -> float:
        return math.pi * (self.r_max**2 - self.r_min**2)

    @property
    def mean_count(self) -> float:
        return self.density * self.area


@dataclass(frozen=True)
class SelfInterference:
    """Residual self-interference ``delta * p00 * x00`` of a full-duplex node."""

    tx_power: float = 1.0
    attenuation_dB: float = 100.0
    fading: CompositeFadingParams = field(default_factory=CompositeFadingParams)

    def __post_init__(self):
        if not self.attenuation_dB >= 0:
            raise ValueError(f"SI attenuation must be >= 0 dB, got {self.attenuation_dB}")
        if not self.tx_power > 0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")

    @property
    def delta(self) -> float:
        return 10.0 ** (-self.attenuation_dB / 10.0)


def _radial_integral(field: AnnulusField, n: int) -> float:
    """``(r_min^{2-n a} - r_max^{2-n a}) / (n a - 2)``, stable as r_min -> r_max."""
    s = 2.0 - n * field.alpha
    if s == 0:
        raise ValueError(f"singular radial integral: n*alpha = 2 at n={n}")
    head = field.r_min**s
    # r_min^s - r_max^s = -r_min^s * expm1(s ln(r_max / r_min))
    diff = -head * math.expm1(s * math.log(field.r_max / field.r_min))
    return diff / (-s)


def _check_order(n_max: int):
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")


def single_tx_raw_moments(field: AnnulusField, n_max: int = 2) -> list[float]:
    """``E[Y^n]`` for one transmitter placed uniformly in the annulus."""
    _check_order(n_max)
    x = composite_to_lognormal(field.fading)
    norm = 2.0 / (field.r_max**2 - field.r_min**2)
    return [
        field.tx_power**n * norm * _radial_integral(field, n) * lognormal_moment(x, n)
        for n in range(1, n_max + 1)
    ]


def moments_to_cumulants(moments) -> CumulantVector:
    """Raw moments ``(E[Y], E[Y^2], ...)`` to cumulants via the standard recursion."""
    mu = [float(m) for m in moments]
    if len(mu) < 2:
        raise ValueError("need at least two raw moments")
    kappa: list[float] = []
    for n in range(1, len(mu) + 1):
        k = mu[n - 1] - sum(
            comb(n - 1, j - 1) * kappa[j - 1] * mu[n - j - 1] for j in range(1, n)
        )
        kappa.append(k)
    return CumulantVector(tuple(kappa))


def single_tx_cumulants(field: AnnulusField, n_max: int = 2) -> CumulantVector:
    """Cumulants of ``Y = p R^-alpha X`` with R uniform over the annulus area."""
    return moments_to_cumulants(single_tx_raw_moments(field, n_max))


def ppp_field_cumulants(field: AnnulusField, n_max: int = 2) -> CumulantVector:
    """Cumulants of the aggregate interference from a PPP over the annulus.

    By Campbell's theorem ``kappa_n = 2 pi lambda p^n I_n E[X^n]`` where
    ``I_n`` is the radial integral of ``r^{1 - n alpha}``.
    """
    _check_order(n_max)
    if field.density == 0:
        return CumulantVector.zeros(n_max)
    x = composite_to_lognormal(field.fading)
    return CumulantVector(
        tuple(
            2.0 * math.pi * field.density * field.tx_power**n
            * _radial_integral(field, n) * lognormal_moment(x, n)
            for n in range(1, n_max + 1)
        )
    )


def self_interference_cumulants(si: SelfInterference, n_max: int = 2) -> CumulantVector:
    _check_order(n_max)
    scale = si.delta * si.tx_power
    if scale == 0.0:
        return CumulantVector.zeros(n_max)
    x = composite_to_lognormal(si.fading)
    return moments_to_cumulants([scale**n * lognormal_moment(x, n) for n in range(1, n_max + 1)])


def add_cumulants(a: CumulantVector, b: CumulantVector, *more: CumulantVector) -> CumulantVector:
    """Cumulants of a sum of independent variables."""
    vecs = (a, b) + more
    n = len(a)
    if any(len(v) != n for v in vecs):
        raise ValueError(f"cumulant vectors differ in length: {[len(v) for v in vecs]}")
    return CumulantVector(tuple(math.fsum(v.kappa[i] for v in vecs) for i in range(n)))


def cumulants_to_lognormal(kappa: CumulantVector) -> LognormalParams:
    """Match a lognormal to ``(kappa_1, kappa_2)``; the result is in dB."""
    k1, k2 = kappa[0], kappa[1]
    if not k1 > 0:
        raise ValueError(f"lognormal matching needs kappa_1 > 0, got {k1}")
    ratio = k2 / (k1 * k1)
    sigma2 = math.log1p(ratio)
    mu = math.log(k1) - 0.5 * sigma2
    return LognormalParams.from_ln(mu, math.sqrt(sigma2))
