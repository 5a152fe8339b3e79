"""Evaluation scenarios: HD/FD duplexing crossed with fixed/reactive relays.

Defaults describe a dense urban cell: PPP interferers with
intensity 5e-5 /m^2 over 25-500 m, path-loss exponent 3, m=16 Nakagami with
10 dB shadowing, interferers at 30 dBm, a 50 m source-destination link and
three contending relays.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from fdrelay.contention import pgf_mean, simulate_trees, tagged_pgf, cri_pgf
from fdrelay.fading import CompositeFadingParams, LognormalParams
from fdrelay.interference import (
    AnnulusField,
    CumulantVector,
    SelfInterference,
    add_cumulants,
    cumulants_to_lognormal,
    ppp_field_cumulants,
    self_interference_cumulants,
)
from fdrelay.link import (
    LinkBudget,
    SirDistribution,
    dbm_to_watts,
    fixed_link_power,
    random_link_power,
    sir_distribution,
    success_probability,
)
from fdrelay.semimarkov import (
    DUPLEX_MODES,
    STRATEGIES,
    SemiMarkovModel,
    build_holding,
    build_reward,
    build_transition,
    sample_path,
    stationary_distribution,
    throughput,
)

SWEEP_PARAMS = {
    "sd_distance": "sd_distance_m",
    "source_power": "source_power_dBm",
    "si_attenuation": "si_attenuation_dB",
}
COMBINATIONS = tuple((d, s) for d in DUPLEX_MODES for s in STRATEGIES)


@dataclass(frozen=True)
class ScenarioConfig:
    duplex: str = "HD"
    strategy: str = "fixed"
    sd_distance_m: float = 50.0
    # None: halfway between source and destination
    sr_distance_m: float | None = None
    # reactive relays sit uniformly in this annulus around the source;
    # None for the outer radius means sd_distance_m
    fwd_r_min_m: float = 1.0
    fwd_r_max_m: float | None = None
    source_power_dBm: float = 30.0
    interferer_power_dBm: float = 30.0
    # None: same as the source
    ue_power_dBm: float | None = None
    # None: same as the BS tier; 0 removes the UE tier
    ue_density: float | None = None
    # transmit power leaking into an FD receiver; None: same as the source
    si_power_dBm: float | None = None
    si_attenuation_dB: float = 100.0
    si_nakagami_m: float = 16.0
    gamma_th_dB: float = 0.0
    contenders: int = 3
    density: float = 5e-5
    r_min_m: float = 25.0
    r_max_m: float = 500.0
    alpha: float = 3.0
    nakagami_m: float = 16.0
    shadowing_std_dB: float = 10.0
    fixed_relay_overhead_slots: float = 0.0
    l_max: int = 512
    seed: int = 0

    def __post_init__(self):
        if self.duplex not in DUPLEX_MODES:
            raise ValueError(f"duplex must be one of {DUPLEX_MODES}, got {self.duplex!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not self.sd_distance_m > 0:
            raise ValueError(f"sd_distance_m must be > 0, got {self.sd_distance_m}")
        if self.sr_distance_m is not None and not self.sr_distance_m > 0:
            raise ValueError(f"sr_distance_m must be > 0, got {self.sr_distance_m}")
        if self.contenders < 1:
            raise ValueError(f"contenders must be >= 1, got {self.contenders}")
        if self.fixed_relay_overhead_slots < 0:
            raise ValueError("fixed_relay_overhead_slots must be >= 0")
        # builds every field once so module-level invariants surface here
        self.bs_field()
        self.ue_field()
        self.self_interference()
        self.forwarding_field()

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    # -- derived model pieces -------------------------------------------

    def link_fading(self) -> CompositeFadingParams:
        return CompositeFadingParams(self.nakagami_m, 0.0, self.shadowing_std_dB)

    def bs_field(self) -> AnnulusField:
        return AnnulusField(
            self.density, self.r_min_m, self.r_max_m, self.alpha,
            dbm_to_watts(self.interferer_power_dBm), self.link_fading(),
        )

    def ue_field(self) -> AnnulusField:
        density = self.density if self.ue_density is None else self.ue_density
        power = self.source_power_dBm if self.ue_power_dBm is None else self.ue_power_dBm
        return AnnulusField(
            density, self.r_min_m, self.r_max_m, self.alpha,
            dbm_to_watts(power), self.link_fading(),
        )

    def self_interference(self) -> SelfInterference:
        power = self.source_power_dBm if self.si_power_dBm is None else self.si_power_dBm
        return SelfInterference(
            dbm_to_watts(power), self.si_attenuation_dB, CompositeFadingParams(self.si_nakagami_m)
        )

    def forwarding_field(self) -> AnnulusField:
        r_max = self.sd_distance_m if self.fwd_r_max_m is None else self.fwd_r_max_m
        return AnnulusField(
            0.0, self.fwd_r_min_m, r_max, self.alpha,
            dbm_to_watts(self.source_power_dBm), self.link_fading(),
        )

    @property
    def relay_distance_m(self) -> float:
        return self.sd_distance_m / 2 if self.sr_distance_m is None else self.sr_distance_m

    def sd_budget(self) -> LinkBudget:
        return LinkBudget(self.source_power_dBm, self.sd_distance_m, self.alpha, self.link_fading())

    def sr_budget(self) -> LinkBudget:
        return LinkBudget(self.source_power_dBm, self.relay_distance_m, self.alpha, self.link_fading())


@dataclass(frozen=True)
class ScenarioResult:
    p_sd: float
    p_sr: float
    mean_selection_slots: float
    eta: float
    diagnostics: dict = field(default_factory=dict, compare=False)


def interference_tiers(cfg: ScenarioConfig) -> dict[str, CumulantVector]:
    """Cumulants of each interfering tier seen by a tagged receiver."""
    tiers = {"bs": ppp_field_cumulants(cfg.bs_field())}
    if cfg.duplex == "FD":
        tiers["ue"] = ppp_field_cumulants(cfg.ue_field())
        tiers["si"] = self_interference_cumulants(cfg.self_interference())
    return tiers


def aggregate_interference(cfg: ScenarioConfig) -> CumulantVector:
    tiers = list(interference_tiers(cfg).values())
    if len(tiers) == 1:
        return tiers[0]
    return add_cumulants(*tiers)


def desired_sd(cfg: ScenarioConfig) -> LognormalParams:
    return fixed_link_power(cfg.sd_budget())


def desired_sr(cfg: ScenarioConfig) -> LognormalParams:
    if cfg.strategy == "fixed":
        return fixed_link_power(cfg.sr_budget())
    return random_link_power(cfg.forwarding_field())


def link_success(desired: LognormalParams, interference: CumulantVector, gamma_th_dB: float):
    """Success probability and SIR law; no interference means certain success."""
    if interference.mean == 0.0:
        return 1.0, None
    sir = sir_distribution(desired, cumulants_to_lognormal(interference))
    return success_probability(sir, gamma_th_dB), sir


def mean_selection_slots(cfg: ScenarioConfig) -> float:
    """Mean tagged-packet CRI among the contending relays (0 for a fixed relay)."""
    if cfg.strategy == "reactive":
        return pgf_mean(tagged_pgf(cfg.contenders, cfg.l_max))
    return 0.0


def build_model(cfg: ScenarioConfig, p_sd: float, p_sr: float) -> SemiMarkovModel:
    return SemiMarkovModel(
        build_transition(p_sd, p_sr),
        build_holding(mean_selection_slots(cfg), cfg.strategy, cfg.fixed_relay_overhead_slots),
        build_reward(cfg.duplex),
    )


def evaluate_point(cfg: ScenarioConfig) -> ScenarioResult:
    tiers = interference_tiers(cfg)
    interference = add_cumulants(*tiers.values()) if len(tiers) > 1 else tiers["bs"]
    p_sd, sir_sd = link_success(desired_sd(cfg), interference, cfg.gamma_th_dB)
    p_sr, sir_sr = link_success(desired_sr(cfg), interference, cfg.gamma_th_dB)
    model = build_model(cfg, p_sd, p_sr)
    pi = stationary_distribution(model.P)
    eta = throughput(model, pi)

    def _sir(s: SirDistribution | None):
        return None if s is None else (s.mu_dB, s.sigma_dB)

    diagnostics = {
        "kappa": {name: (k[0], k[1]) for name, k in tiers.items()},
        "sir_sd": _sir(sir_sd),
        "sir_sr": _sir(sir_sr),
        "pi": tuple(pi.pi),
    }
    return ScenarioResult(p_sd, p_sr, float(model.H[0, 1] - 1.0), eta, diagnostics)


@dataclass(frozen=True)
class SweepRow:
    sweep_param: str
    value: float
    duplex: str
    strategy: str
    p_sd: float
    p_sr: float
    mean_cri: float
    eta: float


def sweep(cfg: ScenarioConfig, param: str, grid, combinations=COMBINATIONS) -> list[SweepRow]:
    """Evaluate every (duplex, strategy) combination at each grid value."""
    if param not in SWEEP_PARAMS:
        raise ValueError(f"sweep parameter must be one of {sorted(SWEEP_PARAMS)}, got {param!r}")
    grid = [float(v) for v in grid]
    if not grid:
        raise ValueError("sweep grid is empty")
    steps = np.diff(grid)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("sweep grid must be strictly monotone")
    attr = SWEEP_PARAMS[param]
    rows = []
    for value in grid:
        for duplex, strategy in combinations:
            point = cfg.replace(**{attr: value, "duplex": duplex, "strategy": strategy})
            res = evaluate_point(point)
            rows.append(
                SweepRow(param, value, duplex, strategy, res.p_sd, res.p_sr,
                         res.mean_selection_slots, res.eta)
            )
    return rows


# -- analytical vs Monte Carlo ---------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    cumulant: float = 0.02
    outage: float = 0.02
    cri: float = 0.01
    eta: float = 0.01


@dataclass(frozen=True)
class Check:
    name: str
    analytical: float
    empirical: float
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error < self.tolerance)


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [dict(dataclasses.asdict(c), passed=c.passed) for c in self.checks],
        }


OUTAGE_GRID_DB = tuple(range(-10, 21, 5))


def validate(
    cfg: ScenarioConfig,
    trials: int,
    tolerances: Tolerances = Tolerances(),
    chain_steps: int = 1_000_000,
    tree_runs: int = 1_000_000,
) -> ValidationReport:
    """Reconcile each analytical stage with its Monte Carlo counterpart."""
    from fdrelay import montecarlo

    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng_cum, rng_out, rng_tree, rng_chain = (
        np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(4)
    )
    checks = []

    field_ = cfg.bs_field()
    kappa = ppp_field_cumulants(field_)
    mean, var = montecarlo.empirical_interference(field_, trials, rng_cum, method="conditional")
    checks.append(Check("interference_kappa1", kappa[0], mean, abs(mean / kappa[0] - 1), tolerances.cumulant))
    checks.append(Check("interference_kappa2", kappa[1], var, abs(var / kappa[1] - 1), tolerances.cumulant))

    sir = montecarlo.empirical_sir_dB(cfg, trials, rng_out)
    interference = aggregate_interference(cfg)
    worst = (0.0, 0.0, -1.0)
    for g in OUTAGE_GRID_DB:
        ana = 1.0 - link_success(desired_sd(cfg), interference, g)[0]
        emp = float(np.mean(sir < g))
        if abs(ana - emp) > worst[2]:
            worst = (ana, emp, abs(ana - emp))
    checks.append(Check("outage_max_abs", *worst, tolerances.outage))

    n = cfg.contenders
    cri, tagged, _ = simulate_trees(n, tree_runs, rng_tree)
    for name, pgf, sample in (("cri_mean", cri_pgf(n, cfg.l_max), cri),
                              ("tagged_mean", tagged_pgf(n, cfg.l_max), tagged)):
        ana, emp = pgf_mean(pgf), float(sample.mean())
        checks.append(Check(name, ana, emp, abs(emp / ana - 1), tolerances.cri))

    res = evaluate_point(cfg)
    model = build_model(cfg, res.p_sd, res.p_sr)
    pgf = tagged_pgf(n, cfg.l_max) if cfg.strategy == "reactive" else None
    emp = sample_path(model, pgf, chain_steps, rng_chain).eta
    checks.append(Check("chain_eta", res.eta, emp, abs(emp / res.eta - 1), tolerances.eta))
    return ValidationReport(tuple(checks))

