"""Distance ||g_t * A - A|| as t decreases, for a few test operators on F^2_(k).

Writes a CSV with one column per operator.

Usage: python3 scripts/heat_smoothing_sweep.py [--k 1] [--trunc 64] [--csv heat.csv]
"""
from __future__ import annotations

import argparse
import csv

import numpy as np

from polyqha import operators as op
from polyqha import qha
from polyqha.operators import SymbolSpec


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trunc", type=int, default=64)
    p.add_argument("--ts", type=float, nargs="*", default=[0.8, 0.4, 0.2, 0.1, 0.05])
    p.add_argument("--csv", help="output CSV path")
    args = p.parse_args(argv)

    space = op.true_poly(args.k, args.trunc)
    ops = {
        "weyl_0.3": op.weyl_matrix(space, 0.3),
        "rank_one": op.rank_one(space, 0, 0),
        "toeplitz_gaussian": op.toeplitz_matrix(args.k, SymbolSpec.gaussian(1.0), args.trunc),
    }
    rows = []
    for t in args.ts:
        row = [t] + [op.operator_norm((qha.heat_smooth(A, t) - A).inner()) for A in ops.values()]
        rows.append(row)
        print(f"t={t:<6g} " + "  ".join(f"{n}={v:.3e}" for n, v in zip(ops, row[1:])))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", *ops])
            w.writerows([[repr(float(v)) for v in r] for r in rows])
    return 0 if np.all(np.diff(np.array(rows)[:, 1:], axis=0) <= 1e-12) else 1


if __name__ == "__main__":
    raise SystemExit(main())
