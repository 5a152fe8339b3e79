import math

import pytest

from fdrelay.contention import pgf_mean, tagged_pgf
from fdrelay.scenario import (
    COMBINATIONS,
    ScenarioConfig,
    Tolerances,
    evaluate_point,
    interference_tiers,
    sweep,
    validate,
)


def test_defaults():
    cfg = ScenarioConfig()
    assert cfg.relay_distance_m == 25.0
    assert cfg.forwarding_field().r_max == 50.0
    assert cfg.bs_field().tx_power == pytest.approx(1.0)


@pytest.mark.parametrize(
    "bad",
    [dict(duplex="TDD"), dict(strategy="best"), dict(alpha=2.0), dict(sd_distance_m=0.0),
     dict(contenders=0), dict(r_min_m=600.0), dict(density=-1.0)],
)
def test_invalid_config(bad):
    with pytest.raises(ValueError):
        ScenarioConfig(**bad)


def test_tiers_by_duplex():
    assert set(interference_tiers(ScenarioConfig())) == {"bs"}
    assert set(interference_tiers(ScenarioConfig(duplex="FD"))) == {"bs", "ue", "si"}


def test_no_interferers_means_certain_delivery():
    res = evaluate_point(ScenarioConfig(density=0.0))
    assert res.p_sd == 1.0 and res.eta == 1.0
    assert res.diagnostics["sir_sd"] is None


def test_fd_without_extra_interference_doubles_relay_reward():
    base = dict(ue_density=0.0, si_attenuation_dB=math.inf, strategy="reactive")
    fd = evaluate_point(ScenarioConfig(duplex="FD", **base))
    hd = evaluate_point(ScenarioConfig(duplex="HD", **base))
    assert (fd.p_sd, fd.p_sr) == pytest.approx((hd.p_sd, hd.p_sr), rel=1e-12)
    p_sd, p_sr, sel = hd.p_sd, hd.p_sr, hd.mean_selection_slots
    relay = (1 - p_sd) * p_sr
    # per attempt cycle starting in the transmit state
    slots = 1 + (1 - p_sd) * sel + relay
    assert hd.eta == pytest.approx((p_sd + relay) / slots, rel=1e-10)
    assert fd.eta == pytest.approx((p_sd + 2 * relay) / slots, rel=1e-10)


def test_selection_cost_only_for_reactive():
    assert evaluate_point(ScenarioConfig()).mean_selection_slots == 0.0
    sel = evaluate_point(ScenarioConfig(strategy="reactive")).mean_selection_slots
    assert sel == pytest.approx(pgf_mean(tagged_pgf(3)), rel=1e-12)


def test_fd_lowers_link_success():
    hd, fd = evaluate_point(ScenarioConfig()), evaluate_point(ScenarioConfig(duplex="FD"))
    assert fd.p_sd < hd.p_sd and fd.p_sr < hd.p_sr


def test_evaluation_is_deterministic():
    a, b = evaluate_point(ScenarioConfig(duplex="FD")), evaluate_point(ScenarioConfig(duplex="FD"))
    assert a == b and a.diagnostics == b.diagnostics


def test_sweep_rows():
    rows = sweep(ScenarioConfig(), "sd_distance", [20.0, 40.0])
    assert len(rows) == 2 * len(COMBINATIONS)
    assert [(r.duplex, r.strategy) for r in rows[:4]] == list(COMBINATIONS)
    assert {r.value for r in rows} == {20.0, 40.0}
    with pytest.raises(ValueError):
        sweep(ScenarioConfig(), "alpha", [3.0])
    with pytest.raises(ValueError):
        sweep(ScenarioConfig(), "sd_distance", [])
    with pytest.raises(ValueError):
        sweep(ScenarioConfig(), "sd_distance", [20.0, 10.0, 30.0])


def test_validate_report_structure():
    rep = validate(ScenarioConfig(), 2000, chain_steps=2000, tree_runs=2000)
    names = [c.name for c in rep.checks]
    assert names == ["interference_kappa1", "interference_kappa2", "outage_max_abs",
                     "cri_mean", "tagged_mean", "chain_eta"]
    d = rep.as_dict()
    assert d["passed"] == rep.passed
    assert all(set(c) >= {"analytical", "empirical", "error", "tolerance", "passed"} for c in d["checks"])


def test_validate_fails_on_impossible_tolerance():
    tight = Tolerances(1e-12, 1e-12, 1e-12, 1e-12)
    assert not validate(ScenarioConfig(), 1000, tight, 1000, 1000).passed
    with pytest.raises(ValueError):
        validate(ScenarioConfig(), 0)
