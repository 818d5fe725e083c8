"""Lifetime-versus-size sweep comparing the heuristic with the SPT baseline."""
from __future__ import annotations

import csv
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import TextIO

from .errors import ConnectivityFailure, InvalidConfig
from .heuristic import HeuristicParams
from .network import DeploymentConfig, derive_seed, generate_network
from .scheduler import format_lifetime, heuristic_schedule, sptbsa
from .tree import UNBOUNDED, EnergyModel

log = logging.getLogger(__name__)

ALGOS = ("heuristic", "sptbsa")
RUN_COLUMNS = ["node_count", "replication", "seed", "algo", "network_lifetime", "periods", "cause"]
SUMMARY_COLUMNS = ["node_count", "algo", "mean_lifetime", "stddev", "failures"]


@dataclass
class ExperimentConfig:
    node_counts: list[int] = field(default_factory=lambda: [200, 400, 600, 800, 1000])
    replications: int = 30
    deployment: DeploymentConfig = field(default_factory=DeploymentConfig)
    energy_model: EnergyModel = field(default_factory=EnergyModel)
    heuristic: HeuristicParams = field(default_factory=HeuristicParams)
    base_seed: int = 0
    output_path: str | None = None
    jobs: int = 1

    def validate(self) -> None:
        if self.replications < 1:
            raise InvalidConfig("replications must be >= 1")
        if not self.node_counts:
            raise InvalidConfig("node_counts must be non-empty")


@dataclass
class RunRow:
    node_count: int
    replication: int
    seed: int
    algo: str
    network_lifetime: float | None  # None marks a failed deployment
    periods: int
    cause: str
    first_tree_lifetime: float | None = None


def _one_cell(cfg: ExperimentConfig, node_count: int, rep: int) -> list[RunRow]:
    seed = derive_seed(cfg.base_seed, node_count, rep)
    dep = replace(cfg.deployment, n_total=node_count, seed=seed)
    try:
        net = generate_network(dep)
    except ConnectivityFailure as exc:
        log.warning("n=%d rep=%d: %s", node_count, rep, exc)
        return [RunRow(node_count, rep, seed, a, None, 0, "failed") for a in ALGOS]

    em = cfg.energy_model
    h = heuristic_schedule(net.copy(), em, cfg.heuristic)
    s = sptbsa(net.copy(), em)
    first_h, first_s = _first_tree(h), _first_tree(s)
    if first_h < first_s:
        log.error("n=%d rep=%d: heuristic first tree %s < SPT %s", node_count, rep, first_h, first_s)
    log.info("n=%d rep=%d first-tree lifetime heuristic=%s sptbsa=%s", node_count, rep, first_h, first_s)
    return [
        RunRow(node_count, rep, seed, "heuristic", h.network_lifetime, h.periods, h.cause, first_h),
        RunRow(node_count, rep, seed, "sptbsa", s.network_lifetime, s.periods, s.cause, first_s),
    ]


def _first_tree(sched) -> float:
    if sched.unbounded:
        return UNBOUNDED
    return sched.entries[0].duration if sched.entries else 0


def _cell_args(cfg: ExperimentConfig):
    return [(cfg, n, r) for n in cfg.node_counts for r in range(cfg.replications)]


def _star(args):
    return _one_cell(*args)


def run_experiment(cfg: ExperimentConfig) -> tuple[list[RunRow], list[dict]]:
    """Run every (node_count, replication) cell; rows come back in cell order."""
    cfg.validate()
    cells = _cell_args(cfg)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_star, cells))
    else:
        results = [_star(c) for c in cells]
    rows = [row for cell in results for row in cell]
    summary = summarize(rows, cfg.node_counts)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            write_csv(rows, summary, fh)
    return rows, summary


def summarize(rows: list[RunRow], node_counts) -> list[dict]:
    out = []
    for n in node_counts:
        for algo in ALGOS:
            mine = [r for r in rows if r.node_count == n and r.algo == algo]
            ok = [r.network_lifetime for r in mine
                  if r.network_lifetime is not None and r.network_lifetime != UNBOUNDED]
            out.append({
                "node_count": n,
                "algo": algo,
                "mean_lifetime": statistics.fmean(ok) if ok else float("nan"),
                "stddev": statistics.stdev(ok) if len(ok) > 1 else 0.0,
                "failures": len(mine) - len(ok),
            })
    return out


def write_csv(rows: list[RunRow], summary: list[dict], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RUN_COLUMNS)
    for r in rows:
        life = "" if r.network_lifetime is None else format_lifetime(r.network_lifetime)
        w.writerow([r.node_count, r.replication, r.seed, r.algo, life, r.periods, r.cause])
    w.writerow(SUMMARY_COLUMNS)
    for s in summary:
        w.writerow([s["node_count"], s["algo"], f"{s['mean_lifetime']:.3f}", f"{s['stddev']:.3f}", s["failures"]])
