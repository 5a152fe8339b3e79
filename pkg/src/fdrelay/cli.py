"""Command line entry point: ``fdrelay {sweep,validate,pgf,analyze}``.

Configuration files are flat ``key = value`` TOML. Omitted keys take the
defaults of :class:`fdrelay.scenario.ScenarioConfig`; unknown or duplicate
keys are rejected. Exit codes: 0 success, 1 validation failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli

from fdrelay.contention import DEFAULT_L_MAX, cri_pgf, pgf_mean, pgf_variance, tagged_pgf
from fdrelay.scenario import (
    SWEEP_PARAMS,
    ScenarioConfig,
    Tolerances,
    evaluate_point,
    sweep,
    validate,
)

CSV_HEADER = ("sweep_param", "value", "duplex", "strategy", "p_sd", "p_sr", "mean_cri", "eta")

# (from, to, steps) per sweep parameter
DEFAULT_GRIDS = {
    "sd_distance": (10.0, 100.0, 10),
    "source_power": (0.0, 40.0, 9),
    "si_attenuation": (120.0, 40.0, 17),
}

# lower bounds checked before building the scenario: key -> (bound, strict)
_BOUNDS = {
    "alpha": (2.0, True),
    "density": (0.0, False),
    "ue_density": (0.0, False),
    "sd_distance_m": (0.0, True),
    "sr_distance_m": (0.0, True),
    "fwd_r_min_m": (0.0, True),
    "fwd_r_max_m": (0.0, True),
    "r_min_m": (0.0, True),
    "r_max_m": (0.0, True),
    "nakagami_m": (0.5, False),
    "si_nakagami_m": (0.5, False),
    "shadowing_std_dB": (0.0, False),
    "si_attenuation_dB": (0.0, False),
    "contenders": (1, False),
    "l_max": (1, False),
    "fixed_relay_overhead_slots": (0.0, False),
    "trials": (1, False),
    "chain_steps": (1, False),
    "tree_runs": (1, False),
    "sweep_steps": (1, False),
}


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """Floats with 12 significant digits; everything else verbatim."""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


@dataclass
class RunConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    sweep_param: str = "sd_distance"
    sweep_from: float | None = None
    sweep_to: float | None = None
    sweep_steps: int | None = None
    trials: int = 100_000
    chain_steps: int = 1_000_000
    tree_runs: int = 1_000_000
    out: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def grid(self) -> list[float]:
        lo, hi, steps = DEFAULT_GRIDS[self.sweep_param]
        lo = lo if self.sweep_from is None else self.sweep_from
        hi = hi if self.sweep_to is None else self.sweep_to
        steps = steps if self.sweep_steps is None else self.sweep_steps
        return [float(v) for v in np.linspace(lo, hi, steps)]


_SCENARIO_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_RUN_FIELDS = {
    f.name: f for f in dataclasses.fields(RunConfig) if f.name not in ("scenario", "tolerances")
}
_TOL_KEYS = {f"tol_{f.name}": f.name for f in dataclasses.fields(Tolerances)}
_INT_KEYS = {"contenders", "l_max", "seed", "trials", "chain_steps", "tree_runs", "sweep_steps"}
_STR_KEYS = {"duplex", "strategy", "sweep_param", "out"}


def _coerce(key: str, value):
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if key in _INT_KEYS:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if key in _BOUNDS:
        bound, strict = _BOUNDS[key]
        if (value <= bound) if strict else (value < bound):
            op = ">" if strict else ">="
            raise ConfigError(f"{key}: must be {op} {bound}, got {value}")
    return value


def build_run_config(values: dict) -> RunConfig:
    """Validate a flat mapping of keys into a :class:`RunConfig`."""
    scenario, run, tols = {}, {}, {}
    for key, value in values.items():
        if isinstance(value, dict):
            raise ConfigError(f"{key}: nested tables are not supported")
        if key in _SCENARIO_FIELDS:
            scenario[key] = _coerce(key, value)
        elif key in _RUN_FIELDS:
            run[key] = _coerce(key, value)
        elif key in _TOL_KEYS:
            tols[_TOL_KEYS[key]] = _coerce(key, value)
        else:
            raise ConfigError(f"{key}: unknown configuration key")
    if run.get("sweep_param", "sd_distance") not in SWEEP_PARAMS:
        raise ConfigError(f"sweep_param: must be one of {sorted(SWEEP_PARAMS)}")
    try:
        sc = ScenarioConfig(**scenario)
    except ValueError as exc:
        raise ConfigError(f"scenario: {exc}") from exc
    return RunConfig(scenario=sc, tolerances=Tolerances(**tols), **run)


_KEY_LINE = re.compile(r"^\s*([A-Za-z0-9_-]+)\s*=")


def _duplicate_key(text: str) -> str | None:
    seen = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _KEY_LINE.match(line)
        if m is None:
            continue
        key = m.group(1)
        if key in seen:
            return f"duplicate key {key!r} at line {lineno} (first set at line {seen[key]})"
        seen[key] = lineno
    return None


def parse_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        values = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {_duplicate_key(text) or exc}") from exc
    return build_run_config(values)


# -- subcommands -----------------------------------------------------------

def sweep_csv(run: RunConfig) -> str:
    rows = sweep(run.scenario, run.sweep_param, run.grid())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([fmt(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue()


def pgf_csv(n_total: int, l_max: int = DEFAULT_L_MAX) -> str:
    lines = []
    for label, pgf in (("tagged", tagged_pgf(n_total, l_max)), ("cri", cri_pgf(n_total, l_max))):
        lines.append(f"# {label} n_total={n_total} l_max={l_max}")
        lines.append("slots,prob")
        for k, p in enumerate(pgf.coeffs):
            if p > 0:
                lines.append(f"{k},{fmt(p)}")
        lines.append(
            f"# {label} mean={fmt(pgf_mean(pgf, math.inf))} "
            f"variance={fmt(pgf_variance(pgf, math.inf))} tail_mass={fmt(max(pgf.tail_mass, 0.0))}"
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


def _load(args) -> RunConfig:
    run = parse_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    for key in ("duplex", "strategy"):
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)
    if overrides:
        try:
            run.scenario = run.scenario.replace(**overrides)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if args.out is not None:
        run.out = args.out
    if getattr(args, "param", None) is not None:
        run.sweep_param = args.param
    for attr, key in (("from_", "sweep_from"), ("to", "sweep_to"), ("steps", "sweep_steps")):
        if getattr(args, attr, None) is not None:
            setattr(run, key, getattr(args, attr))
    if getattr(args, "trials", None) is not None:
        run.trials = args.trials
    if getattr(args, "tol_outage", None) is not None:
        run.tolerances = dataclasses.replace(run.tolerances, outage=args.tol_outage)
    return run


def cmd_sweep(args) -> int:
    run = _load(args)
    _emit(sweep_csv(run), run.out)
    return 0


def cmd_validate(args) -> int:
    run = _load(args)
    if run.trials < 1:
        raise ConfigError("trials must be >= 1")
    report = validate(run.scenario, run.trials, run.tolerances, run.chain_steps, run.tree_runs)
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", run.out)
    return 0 if report.passed else 1


def cmd_pgf(args) -> int:
    _emit(pgf_csv(args.n_total, args.l_max), args.out)
    return 0


def cmd_analyze(args) -> int:
    run = _load(args)
    res = evaluate_point(run.scenario)
    payload = {
        "config": dataclasses.asdict(run.scenario),
        "p_sd": res.p_sd,
        "p_sr": res.p_sr,
        "mean_selection_slots": res.mean_selection_slots,
        "eta": res.eta,
        "diagnostics": res.diagnostics,
    }
    _emit(json.dumps(payload, indent=2) + "\n", run.out)
    return 0


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdrelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat TOML configuration file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("sweep", parents=[common], help="throughput over a parameter grid (CSV)")
    p.add_argument("--param", choices=sorted(SWEEP_PARAMS))
    p.add_argument("--from", dest="from_", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--steps", type=_positive_int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common], help="analytical vs Monte Carlo report (JSON)")
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--tol-outage", type=float)
    p.add_argument("--duplex", choices=["HD", "FD"])
    p.add_argument("--strategy", choices=["fixed", "reactive"])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pgf", help="tagged and full CRI distributions (CSV)")
    p.add_argument("--n-total", type=_positive_int, default=3)
    p.add_argument("--l-max", type=_positive_int, default=DEFAULT_L_MAX)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pgf)

    p = sub.add_parser("analyze", parents=[common], help="evaluate one scenario point (JSON)")
    p.add_argument("--duplex", choices=["HD", "FD"])
    p.add_argument("--strategy", choices=["fixed", "reactive"])
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"fdrelay: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
