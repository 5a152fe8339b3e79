"""Sweep throughput against residual self-interference attenuation for all four HD/FD x fixed/reactive combinations."""

import argparse
from pathlib import Path

from fdrelay.cli import RunConfig, parse_config, sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="flat TOML scenario overrides")
    ap.add_argument("--out", default="results/sweep_si.csv")
    args = ap.parse_args()

    run = parse_config(args.config) if args.config else RunConfig()
    run.sweep_param = "si_attenuation"
    text = sweep_csv(run)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out} ({text.count(chr(10)) - 1} rows)")


if __name__ == "__main__":
    main()
