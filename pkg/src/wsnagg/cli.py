"""Command line entry point: ``wsnagg {gen,simulate,oracle,experiment}``."""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from .errors import WSNError
from .experiment import ExperimentConfig, run_experiment, write_csv
from .heuristic import HeuristicParams
from .network import DeploymentConfig, generate_network, read_network, write_network
from .oracle import DEFAULT_CAP, optimal_tree_lifetime
from .scheduler import format_lifetime, heuristic_schedule, sptbsa, write_schedule
from .tree import EnergyModel, write_tree


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--etx", type=int, default=2, help="energy per transmitted packet")
    p.add_argument("--erx", type=int, default=1, help="energy per received packet")
    p.add_argument("--alpha", type=int, default=2, help="raw units aggregated per packet")


def _add_heuristic_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, default=0.1, help="low-energy threshold as a fraction of the median")
    p.add_argument("--max-passes", type=int, default=10)


def _add_deploy_flags(p: argparse.ArgumentParser, nodes_default) -> None:
    p.add_argument("--nodes", default=nodes_default,
                   help="number of non-sink nodes (experiment: comma-separated list)")
    p.add_argument("--relays", type=int, default=50)
    p.add_argument("--range", type=float, default=2.0, dest="comm_range")
    p.add_argument("--energy", type=int, default=100_000)
    p.add_argument("--field", type=float, nargs=2, default=(10.0, 10.0), metavar=("W", "H"))
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsnagg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random network file")
    _add_deploy_flags(g, "200")
    g.add_argument("--out", default="-")

    s = sub.add_parser("simulate", help="run a schedule on a network file")
    s.add_argument("network")
    s.add_argument("--algo", choices=["heuristic", "sptbsa"], default="heuristic")
    _add_model_flags(s)
    _add_heuristic_flags(s)
    s.add_argument("--out", default="-")

    o = sub.add_parser("oracle", help="best single-tree lifetime by exhaustive search")
    o.add_argument("network")
    o.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_model_flags(o)
    o.add_argument("--out", default="-")

    e = sub.add_parser("experiment", help="lifetime vs. node count sweep to CSV")
    _add_deploy_flags(e, "200,400,600,800,1000")
    _add_model_flags(e)
    _add_heuristic_flags(e)
    e.add_argument("--replications", type=int, default=30)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out", default="-")
    return parser


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _energy_model(args) -> EnergyModel:
    return EnergyModel(alpha=args.alpha, e_tx=args.etx, e_rx=args.erx)


def _deployment(args, n_total: int) -> DeploymentConfig:
    return DeploymentConfig(n_total=n_total, n_relays=args.relays, field=tuple(args.field),
                            comm_range=args.comm_range, energy_init=args.energy, seed=args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen":
            net = generate_network(_deployment(args, int(args.nodes)))
            with _output(args.out) as fh:
                write_network(net, fh)

        elif args.command == "simulate":
            with open(args.network) as fh:
                net = read_network(fh)
            em = _energy_model(args)
            if args.algo == "sptbsa":
                sched = sptbsa(net, em)
            else:
                sched = heuristic_schedule(net, em, HeuristicParams(args.theta, args.max_passes))
            with _output(args.out) as fh:
                write_schedule(sched, fh)

        elif args.command == "oracle":
            with open(args.network) as fh:
                net = read_network(fh)
            life, tree = optimal_tree_lifetime(net, _energy_model(args), cap=args.cap)
            with _output(args.out) as fh:
                fh.write(f"optimal {format_lifetime(life)}\n")
                write_tree(tree, fh)

        elif args.command == "experiment":
            counts = _int_list(args.nodes)
            cfg = ExperimentConfig(
                node_counts=counts,
                replications=args.replications,
                deployment=_deployment(args, counts[0]),
                energy_model=_energy_model(args),
                heuristic=HeuristicParams(args.theta, args.max_passes),
                base_seed=args.seed,
                jobs=args.jobs,
            )
            rows, summary = run_experiment(cfg)
            with _output(args.out) as fh:
                write_csv(rows, summary, fh)
    except (WSNError, OSError) as exc:
        print(f"wsnagg: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
