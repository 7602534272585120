"""Toeplitz operators on F^2_(k) with nonzero symbol that vanish.

For each radius r in Sigma_k the witness symbol gives T = L_{k-1}(r^2) W_r = 0
on the true-poly space F^2_(k), while the same symbol on F^2_(1) gives the
nonzero Weyl operator.  Moving the radius off Sigma_k makes the norm reappear.

Usage: python3 scripts/vanishing_toeplitz_demo.py [--k 3] [--trunc 64]
"""
from __future__ import annotations

import argparse

from polyqha import operators as op
from polyqha import regularity as rg


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trunc", type=int, default=64)
    p.add_argument("--offset", type=float, default=0.05, help="radial offset for the contrast row")
    args = p.parse_args(argv)

    radii = rg.sigma_set(args.k).radii
    print(f"Sigma_{args.k} radii: " + ", ".join(f"{r:.6f}" for r in radii))
    print(f"{'radius':>10}  {'||T_k||':>10}  {'||T_1||':>10}")
    for r in radii:
        for x in (r, r + args.offset):
            f = rg.witness_symbol(x)
            Tk = op.toeplitz_matrix(args.k, f, args.trunc)
            T1 = op.toeplitz_matrix(1, f, args.trunc)
            print(f"{x:10.6f}  {op.operator_norm(Tk.inner()):10.2e}  {op.operator_norm(T1.inner()):10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
