"""Run every registered check with default settings and collect the reports.

Usage: python3 scripts/run_all_checks.py [--out-dir results] [--seed 0] [--only NAME ...]
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from polyqha import experiments as ex


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="results")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", nargs="*", help="subset of check names")
    args = p.parse_args(argv)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = args.only or list(ex.REGISTRY)
    summary = {}
    for name in names:
        report = ex.run(name, ex.ExperimentConfig(check_name=name, seed=args.seed))
        ex.write_json(report, out / f"{name}.json")
        ex.write_csv(report, out / f"{name}.csv")
        summary[name] = report.overall_pass
        print(f"{'PASS' if report.overall_pass else 'FAIL'}  {name}  ({report.runtime_ms / 1000:.1f} s)")
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0 if all(summary.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
