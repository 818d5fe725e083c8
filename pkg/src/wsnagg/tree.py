"""Data aggregation trees and the per-node load / energy / lifetime model.

All arithmetic is exact integer arithmetic. A node that spends no energy per
round (a leaf relay, or the sink) has lifetime ``UNBOUNDED``, which is
``math.inf`` so that it compares and ``min()``s naturally against ints.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

from .errors import FormatError, InvalidConfig, InvalidTree
from .network import Network

UNBOUNDED = math.inf


@dataclass(frozen=True)
class EnergyModel:
    alpha: int = 2
    e_tx: int = 2
    e_rx: int = 1

    def __post_init__(self):
        if self.alpha < 2:
            raise InvalidConfig("aggregation ratio alpha must be >= 2")
        if self.e_tx < 0 or self.e_rx < 0 or (self.e_tx == 0 and self.e_rx == 0):
            raise InvalidConfig("e_tx, e_rx must be non-negative and not both zero")

    def packets(self, tot: int) -> int:
        return -(-tot // self.alpha)

    def leaf_cost(self, rho: int) -> int:
        """Per-round energy of a node that only sends its own data."""
        return self.e_tx * self.packets(rho)


@dataclass(frozen=True, slots=True)
class NodeStats:
    tot: int
    delta: int
    eng: int
    life: float  # int, or UNBOUNDED


@dataclass
class AggregationTree:
    """Rooted tree given by parent pointers, with derived children and hops.

    ``children`` lists are kept sorted by id. Build one with
    :meth:`from_parents` unless you deliberately want an unchecked object
    (e.g. to exercise :func:`validate_tree`).
    """

    sink: int
    parent: dict[int, int]
    children: dict[int, list[int]] = field(default_factory=dict)
    hop: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_parents(cls, sink: int, parent: Mapping[int, int]) -> AggregationTree:
        parent = dict(sorted(parent.items()))
        if sink in parent:
            raise InvalidTree([f"sink {sink} has a parent"])
        children: dict[int, list[int]] = {sink: []}
        for u in parent:
            children.setdefault(u, [])
        for u, p in parent.items():
            if p not in children:
                raise InvalidTree([f"orphan: parent {p} of {u} is not in the tree"])
            children[p].append(u)
        hop = {sink: 0}
        stack = [sink]
        while stack:
            u = stack.pop()
            for c in children[u]:
                hop[c] = hop[u] + 1
                stack.append(c)
        if len(hop) != len(children):
            stuck = sorted(set(children) - set(hop))
            raise InvalidTree([f"cycle or unrooted nodes: {stuck}"])
        return cls(sink, parent, children, hop)

    @property
    def nodes(self) -> list[int]:
        return sorted(self.hop)

    def is_leaf(self, u: int) -> bool:
        return not self.children.get(u)

    def bfs_order(self) -> list[int]:
        """Nodes by ascending hop, then id."""
        return sorted(self.hop, key=lambda u: (self.hop[u], u))

    def reparent(self, u: int, new_parent: int) -> AggregationTree:
        """Copy with ``u`` moved under ``new_parent`` (hops recomputed)."""
        parent = dict(self.parent)
        parent[u] = new_parent
        return AggregationTree.from_parents(self.sink, parent)


def validate_tree(net: Network, tree: AggregationTree) -> list[str]:
    """Return every violated tree invariant; an empty list means valid."""
    out: list[str] = []
    sink = tree.sink
    if sink != net.sink_id:
        out.append(f"root {sink} is not the network sink {net.sink_id}")
    if sink in tree.parent:
        out.append(f"sink {sink} has a parent")
    if tree.hop.get(sink) != 0:
        out.append("sink hop is not 0")
    members = set(tree.hop) | set(tree.parent) | {sink}
    for u in sorted(members):
        if not (0 <= u < len(net)):
            out.append(f"unknown node {u}")
    for u in sorted(members - {sink}):
        if u not in tree.parent:
            out.append(f"orphan: {u} has no parent")
    for u, p in sorted(tree.parent.items()):
        if u == sink:
            continue
        if p == u:
            out.append(f"cycle: {u} is its own parent")
            continue
        if 0 <= u < len(net) and 0 <= p < len(net) and not net.has_edge(u, p):
            out.append(f"non-edge: ({u}, {p}) is not a network edge")
        if u not in tree.hop or p not in tree.hop or tree.hop[u] != tree.hop[p] + 1:
            out.append(f"bad hop at {u}")
    # every parent chain must end at the sink
    for u in sorted(tree.parent):
        seen = {u}
        x = u
        while x != sink and x in tree.parent:
            x = tree.parent[x]
            if x in seen:
                out.append(f"cycle: {u} never reaches the sink")
                break
            seen.add(x)
    expected: dict[int, list[int]] = {}
    for u, p in tree.parent.items():
        expected.setdefault(p, []).append(u)
    got = {u: sorted(cs) for u, cs in tree.children.items() if cs}
    if {u: sorted(cs) for u, cs in expected.items()} != got:
        out.append("children map is not the inverse of parent map")
    return out


def check_tree(net: Network, tree: AggregationTree) -> None:
    violations = validate_tree(net, tree)
    if violations:
        raise InvalidTree(violations)


def _life(energy: int, eng: int) -> float:
    return energy // eng if eng > 0 else UNBOUNDED


def compute_stats(net: Network, tree: AggregationTree, em: EnergyModel) -> dict[int, NodeStats]:
    """Per-node raw load, packet count, per-round energy and lifetime."""
    check_tree(net, tree)
    tot: dict[int, int] = {}
    delta: dict[int, int] = {}
    stats: dict[int, NodeStats] = {}
    for u in sorted(tree.hop, key=lambda u: -tree.hop[u]):
        kids = tree.children.get(u, ())
        tot[u] = net.nodes[u].rho + sum(tot[c] for c in kids)
        delta[u] = em.packets(tot[u])
        if u == tree.sink:
            stats[u] = NodeStats(tot[u], delta[u], 0, UNBOUNDED)
            continue
        eng = em.e_rx * sum(delta[c] for c in kids) + em.e_tx * delta[u]
        stats[u] = NodeStats(tot[u], delta[u], eng, _life(net.nodes[u].energy, eng))
    return dict(sorted(stats.items()))


def tree_lifetime(stats: Mapping[int, NodeStats], sink_id: int) -> float:
    """Minimum node lifetime over non-sink nodes (``UNBOUNDED`` if none is finite)."""
    return min((s.life for u, s in stats.items() if u != sink_id), default=UNBOUNDED)


def bottleneck(stats: Mapping[int, NodeStats], sink_id: int) -> int | None:
    """Lowest-id non-sink node attaining the tree lifetime, or None if unbounded."""
    life = tree_lifetime(stats, sink_id)
    if life == UNBOUNDED:
        return None
    return min(u for u, s in stats.items() if u != sink_id and s.life == life)


def evaluate(net: Network, tree: AggregationTree, em: EnergyModel) -> float:
    return tree_lifetime(compute_stats(net, tree, em), tree.sink)


# --- text format -----------------------------------------------------------

def write_tree(tree: AggregationTree, fh: TextIO) -> None:
    fh.write(f"tree {tree.sink}\n")
    for u in sorted(tree.parent):
        fh.write(f"edge {u} {tree.parent[u]}\n")


def dumps_tree(tree: AggregationTree) -> str:
    buf = io.StringIO()
    write_tree(tree, buf)
    return buf.getvalue()


def read_tree(lines: TextIO | Iterable[str]) -> AggregationTree:
    sink = None
    parent: dict[int, int] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "tree" and len(parts) == 2 and sink is None:
                sink = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                child, par = int(parts[1]), int(parts[2])
                if child in parent:
                    raise FormatError(f"line {lineno}: node {child} has two parents")
                parent[child] = par
            else:
                raise FormatError(f"line {lineno}: unrecognised record {line!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: {exc}") from exc
    if sink is None:
        raise FormatError("missing 'tree' header line")
    return AggregationTree.from_parents(sink, parent)


def loads_tree(text: str) -> AggregationTree:
    return read_tree(text.splitlines())
