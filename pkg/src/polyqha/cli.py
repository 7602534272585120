"""Command-line entry point: ``polyqha list`` and ``polyqha run <check>``."""
from __future__ import annotations

import argparse
import sys

from . import experiments as ex
from .operators import QuadratureInsufficient

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_QUADRATURE = 0, 1, 2, 3


def _complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyqha", description="Numerical checks for quantum harmonic analysis on polyanalytic Fock spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list", help="list registered checks")
    r = sub.add_parser("run", help="run one check and write a JSON report")
    r.add_argument("check", help="check name (see `polyqha list`)")
    space = r.add_mutually_exclusive_group()
    space.add_argument("--k", type=int, help="true-poly index k")
    space.add_argument("--n", type=int, help="full-poly index n")
    r.add_argument("--trunc", type=int, default=64, help="truncation N per component (default 64)")
    r.add_argument("--xi", type=_complex, help="phase-space point as RE,IM")
    r.add_argument("--t", type=float, help="heat parameter")
    r.add_argument("--grid-radial", type=int, default=80)
    r.add_argument("--grid-angular", type=int, default=160)
    r.add_argument("--lebesgue-order", type=int, default=40)
    r.add_argument("--tol", type=float, help="override the primary tolerance")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--perturb", type=float, default=0.0, help="run the negative control with this perturbation")
    r.add_argument("--out", required=True, help="JSON report path")
    r.add_argument("--csv", help="CSV mirror of the metrics")
    r.add_argument("--plot-script", help="write a gnuplot script reading the CSV (needs --csv)")
    return p


def _list() -> int:
    width = max(len(n) for n in ex.REGISTRY)
    for name, check in ex.REGISTRY.items():
        print(f"{name:<{width}}  {check.description}  [{check.anchor}]")
    return EXIT_PASS


def _run(args) -> int:
    if args.plot_script and not args.csv:
        print("--plot-script needs --csv", file=sys.stderr)
        return EXIT_CONFIG
    cfg = ex.ExperimentConfig(
        check_name=args.check,
        k=args.k,
        n=args.n,
        N=args.trunc,
        xi=args.xi,
        t=args.t,
        grid_radial=args.grid_radial,
        grid_angular=args.grid_angular,
        lebesgue_order=args.lebesgue_order,
        tol=args.tol,
        seed=args.seed,
        perturb=args.perturb,
    )
    try:
        report = ex.run(args.check, cfg)
    except ex.ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureInsufficient as e:
        print(f"quadrature insufficient: {e}", file=sys.stderr)
        return EXIT_QUADRATURE
    ex.write_json(report, args.out)
    if args.csv:
        ex.write_csv(report, args.csv)
        if args.plot_script:
            ex.write_plot_script(report, args.csv, args.plot_script)
    status = "PASS" if report.overall_pass else "FAIL"
    for m in report.metrics:
        print(f"  {'ok ' if m.passed else 'BAD'} {m.name} = {m.value:.3e} (tol {m.tolerance:.1e})")
    print(f"{args.check}: {status} ({report.runtime_ms:.0f} ms) -> {args.out}")
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return _list()
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())
