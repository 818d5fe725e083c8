"""Breadth-first shortest path tree over the eligible subgraph."""
from __future__ import annotations

from typing import Iterable

from .errors import Disconnected, SinkNotEligible
from .network import Network
from .tree import AggregationTree


def build_spt(net: Network, eligible: Iterable[int] | None = None) -> AggregationTree:
    """Hop-count shortest path tree rooted at the sink.

    Levels are expanded in ascending id order and every node takes its
    lowest-id neighbor on the previous level as parent, so the result is a
    pure function of ``(net, eligible)``.
    """
    allowed = set(range(len(net))) if eligible is None else set(eligible)
    sink = net.sink_id
    if sink not in allowed:
        raise SinkNotEligible(sink)
    parent: dict[int, int] = {}
    seen = {sink}
    frontier = [sink]
    while frontier:
        nxt: dict[int, int] = {}
        for u in frontier:  # ascending id, so the first claim is the lowest-id parent
            for v in net.adjacent(u):
                if v in allowed and v not in seen and v not in nxt:
                    nxt[v] = u
        seen.update(nxt)
        parent.update(nxt)
        frontier = sorted(nxt)
    if len(seen) != len(allowed):
        raise Disconnected(f"unreachable from sink: {sorted(allowed - seen)[:10]}")
    return AggregationTree.from_parents(sink, parent)
