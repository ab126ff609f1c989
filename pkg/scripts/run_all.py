"""Run every config in configs/ and print a one-line summary per experiment."""

import argparse
import sys
from pathlib import Path

from linrec.harness import load_config, run

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs", default=str(ROOT / "configs"))
    ap.add_argument("--out", default="linrec_out")
    ap.add_argument("--parallel", action="store_true")
    args = ap.parse_args()
    failed = 0
    for path in sorted(Path(args.configs).glob("*.ini")):
        report = run(load_config(path), out=args.out, parallel=args.parallel)
        n_ok = sum(a.passed for a in report.assertions)
        print(f"{'PASS' if report.passed else 'FAIL'} {report.experiment:16s} {n_ok}/{len(report.assertions)}")
        failed += not report.passed
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
