#!/usr/bin/env python3
"""Single-tree lifetime of SPT, heuristic and the exhaustive optimum on small random networks."""
import argparse

import numpy as np

from wsnagg.heuristic import build_max_lifetime_tree
from wsnagg.network import DeploymentConfig, generate_network
from wsnagg.oracle import optimal_tree_lifetime
from wsnagg.spt import build_spt
from wsnagg.tree import EnergyModel, evaluate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--nodes", type=int, default=7, help="non-sink nodes per network")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    em = EnergyModel()
    ratios = []
    for i in range(args.instances):
        cfg = DeploymentConfig(n_total=args.nodes, n_relays=2, field=(3.0, 3.0), comm_range=1.5,
                               energy_init=1000, seed=args.seed + i)
        net = generate_network(cfg)
        spt = evaluate(net, build_spt(net), em)
        heur = evaluate(net, build_max_lifetime_tree(net, em), em)
        best, _ = optimal_tree_lifetime(net, em, cap=args.nodes + 1)
        ratios.append(heur / best)
        print(f"{i:3d}  spt={spt:6}  heuristic={heur:6}  optimal={best:6}")
    print(f"mean heuristic/optimal = {np.mean(ratios):.3f}")


if __name__ == "__main__":
    main()
