"""Command-line entry point: ``kicked-tops <subcommand> [options]``."""
import argparse
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .errors import KickedTopsError


def _k_list(text):
    return [float(x) for x in text.replace(" ", "").split(",") if x]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--threads", type=int)
    common.add_argument("--k", type=_k_list, help="comma-separated kick strengths")
    common.add_argument("--ensemble", choices=["su2", "sud", "both"])
    common.add_argument("--kicks", type=int, help="evolution horizon")
    common.add_argument("--count", type=int, help="states per ensemble")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kicked-tops", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="ensemble-averaged entropy traces")
    sub.add_parser("rates", parents=[common], help="initial growth rates and correlations")
    p = sub.add_parser("asymptotic", parents=[common], help="long-time entanglement sweep")
    p.add_argument("--scaling", action="store_true", help="sweep spins j1=j, j2=j+1/2 instead of k")
    p.add_argument("--window", type=int, nargs=2, metavar=("START", "END"))
    sub.add_parser("eigen", parents=[common], help="eigenvector entanglement per k")
    sub.add_parser("classical", parents=[common], help="Lyapunov exponents per k")
    sub.add_parser("moments", parents=[common], help="ensemble moment verification")
    sub.add_parser("verify", parents=[common], help="fast oracle and property checks")
    return parser


def config_from_args(args):
    cfg = ex.ExperimentConfig.from_file(args.config) if args.config else ex.ExperimentConfig()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out is not None:
        changes["output_dir"] = str(args.out)
    if args.threads is not None:
        changes["threads"] = args.threads
    if args.k is not None:
        changes["k_list"] = args.k
    if args.ensemble is not None:
        changes["ensemble"] = ["su2", "sud"] if args.ensemble == "both" else [args.ensemble]
    if args.kicks is not None:
        changes["kicks"] = args.kicks
    if args.count is not None:
        changes["count"] = args.count
    if getattr(args, "window", None):
        changes["asymptotic_window"] = tuple(args.window)
    return cfg.replace(**changes) if changes else cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if args.command == "verify":
            from .verification import run_all
            checks = run_all(cfg.seed)
            for c in checks:
                print(c.line())
            return 0 if all(c.passed for c in checks) else 1
        runners = {"evolve": ex.run_evolution_experiment, "rates": ex.run_rates,
                   "eigen": ex.run_eigen_sweep, "classical": ex.run_classical,
                   "moments": ex.run_moments,
                   "asymptotic": (ex.run_scaling_experiment if getattr(args, "scaling", False)
                                  else ex.run_asymptotic_sweep)}
        runners[args.command](cfg)
        print(f"wrote results to {cfg.output_dir} (config {cfg.config_hash()})")
        return 0
    except KickedTopsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
