#!/usr/bin/env python3
"""Lifetime vs. node count sweep (heuristic vs. SPTBSA), written as CSV.

    python scripts/run_fig1.py --replications 100 --out fig1.csv
"""
import argparse
import logging

from wsnagg.experiment import ExperimentConfig, run_experiment
from wsnagg.network import DeploymentConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--replications", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="fig1.csv")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    cfg = ExperimentConfig(replications=args.replications, base_seed=args.seed, jobs=args.jobs,
                           deployment=DeploymentConfig(), output_path=args.out)
    _, summary = run_experiment(cfg)
    print(f"{'nodes':>6} {'algo':>10} {'mean':>10} {'std':>9} {'fail':>4}")
    for s in summary:
        print(f"{s['node_count']:>6} {s['algo']:>10} {s['mean_lifetime']:>10.1f} {s['stddev']:>9.1f} {s['failures']:>4}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
