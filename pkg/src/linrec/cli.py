"""Command line entry point: ``linrec run|facts|density``.

Exit codes: 0 all assertions passed, 2 some assertion failed, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import density as dn
from .harness import ConfigError, ExperimentConfig, RunReport, emit_report, load_config, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3


def _print_report(report: RunReport, out: Path) -> int:
    for a in report.assertions:
        status = "PASS" if a.passed else "FAIL"
        print(f"{status}  {a.name}  [{a.anchor}]  {a.detail}".rstrip())
    print(f"{report.experiment}: {sum(a.passed for a in report.assertions)}/{len(report.assertions)} passed -> {out}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _run(config: ExperimentConfig, args) -> int:
    if args.seed is not None:
        config.seed = args.seed
    report = run(config, out=args.out, parallel=args.parallel)
    out = Path(args.out or config.output_dir or os.environ.get("LINREC_OUT") or "linrec_out")
    return _print_report(report, out / config.experiment)


def cmd_run(args) -> int:
    return _run(load_config(args.config), args)


def cmd_facts(args) -> int:
    return _run(ExperimentConfig("facts-suite"), args)


def cmd_density(args) -> int:
    try:
        s = dn.read_return_set_csv(args.csv, horizon=args.horizon)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"{args.csv}: {exc}") from exc
    rep = dn.density_report(s)
    print(f"horizon={rep.horizon} hits={len(s)}")
    print(f"upper_density={rep.upper_density:.6g} (N={rep.upper_at})")
    print(f"lower_density={rep.lower_density:.6g} (N={rep.lower_at})")
    print(f"max_gap={rep.max_gap} longest_ap={rep.longest_ap}")
    out = args.out or os.environ.get("LINREC_OUT")
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        stem = Path(args.csv).stem
        dn.write_density_csv(Path(out) / f"{stem}_density.csv", rep)
        emit_report(Path(out) / f"{stem}_density.json",
                    {"upper_density": rep.upper_density, "lower_density": rep.lower_density,
                     "upper_at": rep.upper_at, "lower_at": rep.lower_at, "max_gap": rep.max_gap,
                     "longest_ap": rep.longest_ap, "horizon": rep.horizon,
                     "banach_profile": rep.banach_profile})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: $LINREC_OUT or ./linrec_out)")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--parallel", action="store_true", help="run independent cases in threads")

    ap = argparse.ArgumentParser(prog="linrec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="run an experiment from an INI config")
    r.add_argument("config")
    r.set_defaults(func=cmd_run)
    f = sub.add_parser("facts", parents=[common], help="run the property sweeps with defaults")
    f.set_defaults(func=cmd_facts)
    d = sub.add_parser("density", help="density analytics for a CSV with an 'n' column")
    d.add_argument("csv")
    d.add_argument("--horizon", type=int, help="observation horizon (default: last time)")
    d.add_argument("--out", help="also write <stem>_density.csv/json here")
    d.set_defaults(func=cmd_density)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
