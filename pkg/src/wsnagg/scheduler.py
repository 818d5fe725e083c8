"""Multi-period scheduling of aggregation trees and energy accounting.

Each period builds a fresh tree on the current residual energies and runs
it for its full lifetime, i.e. until its bottleneck node cannot fund
another round. The network lifetime is the sum of the period lengths.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Callable, TextIO

from .errors import Disconnected, Overdraft
from .heuristic import HeuristicParams, build_max_lifetime_tree
from .network import Network, reachable
from .spt import build_spt
from .tree import UNBOUNDED, AggregationTree, EnergyModel, bottleneck, compute_stats, tree_lifetime

log = logging.getLogger(__name__)

SOURCE_DEAD = "source_dead"
DISCONNECTED = "disconnected"
ZERO_LIFETIME = "zero_lifetime_tree"
UNBOUNDED_CAUSE = "unbounded"

TreeBuilder = Callable[[Network, EnergyModel, set], AggregationTree]


@dataclass
class ScheduleEntry:
    tree: AggregationTree
    duration: int
    bottleneck: int


@dataclass
class Schedule:
    entries: list[ScheduleEntry] = field(default_factory=list)
    network_lifetime: float = 0
    cause: str = ""

    @property
    def unbounded(self) -> bool:
        return self.network_lifetime == UNBOUNDED

    @property
    def periods(self) -> int:
        return len(self.entries)


def apply_rounds(net: Network, tree: AggregationTree, em: EnergyModel, rounds: int) -> Network:
    """Drain ``rounds`` working rounds of ``tree`` from ``net`` in place."""
    if rounds < 1:
        raise ValueError(f"rounds must be a positive integer, got {rounds}")
    stats = compute_stats(net, tree, em)
    for u, s in stats.items():
        if u != net.sink_id and rounds * s.eng > net.nodes[u].energy:
            raise Overdraft(f"node {u}: {rounds} rounds need {rounds * s.eng}, has {net.nodes[u].energy}")
    for u, s in stats.items():
        if u != net.sink_id:
            net.nodes[u].energy -= rounds * s.eng
    return net


def heuristic_builder(p: HeuristicParams = HeuristicParams()) -> TreeBuilder:
    def build(net, em, eligible):
        return build_max_lifetime_tree(net, em, p, eligible)
    return build


def spt_builder(net: Network, em: EnergyModel, eligible: set) -> AggregationTree:
    return build_spt(net, eligible)


def live_nodes(net: Network, em: EnergyModel) -> tuple[set[int] | None, str | None]:
    """Nodes a new tree may span, or ``(None, cause)`` if the network is over.

    Sources must be able to send their own data for one round; other nodes
    take part only while they can send at least one packet. Relays cut off
    from the sink are dropped.
    """
    for u in net.sources:
        n = net.nodes[u]
        if n.energy < em.leaf_cost(n.rho):
            return None, SOURCE_DEAD
    able = {n.id for n in net.nodes if n.energy >= em.e_tx}
    able.add(net.sink_id)
    connected = reachable(net, able)
    if any(u not in connected for u in net.sources):
        return None, DISCONNECTED
    return connected, None


def run_schedule(net: Network, em: EnergyModel, builder: TreeBuilder) -> Schedule:
    """Build and run trees until the network can no longer serve every source.

    ``net`` is drained in place.
    """
    eligible, cause = live_nodes(net, em)
    if eligible is None and cause == DISCONNECTED:
        raise Disconnected("sources cannot reach the sink at start")
    sched = Schedule()
    while True:
        eligible, cause = live_nodes(net, em)
        if eligible is None:
            sched.cause = cause
            break
        tree = builder(net, em, eligible)
        stats = compute_stats(net, tree, em)
        life = tree_lifetime(stats, net.sink_id)
        if life == UNBOUNDED:
            log.warning("tree lifetime is unbounded; no source spends energy")
            sched.network_lifetime = UNBOUNDED
            sched.cause = UNBOUNDED_CAUSE
            return sched
        if life == 0:
            sched.cause = ZERO_LIFETIME
            break
        sched.entries.append(ScheduleEntry(tree, int(life), bottleneck(stats, net.sink_id)))
        apply_rounds(net, tree, em, int(life))
    sched.network_lifetime = sum(e.duration for e in sched.entries)
    return sched


def sptbsa(net: Network, em: EnergyModel) -> Schedule:
    """Baseline: a fresh plain BFS tree every period."""
    return run_schedule(net, em, spt_builder)


def heuristic_schedule(net: Network, em: EnergyModel, p: HeuristicParams = HeuristicParams()) -> Schedule:
    return run_schedule(net, em, heuristic_builder(p))


def format_lifetime(value: float) -> str:
    return "unbounded" if value == UNBOUNDED else str(int(value))


def write_schedule(sched: Schedule, fh: TextIO) -> None:
    for i, e in enumerate(sched.entries, 1):
        fh.write(f"period {i} {e.duration} {e.bottleneck}\n")
    fh.write(f"lifetime {format_lifetime(sched.network_lifetime)} {sched.cause}\n")


def dumps_schedule(sched: Schedule) -> str:
    buf = io.StringIO()
    write_schedule(sched, buf)
    return buf.getvalue()
