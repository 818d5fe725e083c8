"""Exhaustive ground truth for small networks.

``enumerate_spanning_trees`` walks the sorted edge list, deciding
include/exclude per edge; an include is pruned when it would close a cycle
and an exclude when the remaining edges could no longer connect the graph,
so every leaf of the search is a distinct spanning tree.
"""
from __future__ import annotations

from collections import deque
from typing import Iterator

from .errors import Disconnected, TooLarge
from .network import Network, is_connected
from .tree import UNBOUNDED, AggregationTree, EnergyModel, compute_stats, tree_lifetime

DEFAULT_CAP = 9


def _connects(n: int, edge_lists) -> bool:
    label = list(range(n))

    def find(a):
        while label[a] != a:
            label[a] = label[label[a]]
            a = label[a]
        return a

    parts = n
    for edges in edge_lists:
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                label[ru] = rv
                parts -= 1
    return parts <= 1


def _root(sink: int, n: int, edges) -> AggregationTree:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    parent = {}
    seen = {sink}
    queue = deque([sink])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                queue.append(v)
    return AggregationTree.from_parents(sink, parent)


def enumerate_spanning_trees(net: Network, cap: int = DEFAULT_CAP) -> Iterator[AggregationTree]:
    """Yield every spanning tree of the network exactly once, rooted at the sink."""
    n = len(net)
    if n > cap:
        raise TooLarge(f"{n} nodes exceeds enumeration cap {cap}")
    if not is_connected(net):
        raise Disconnected("network is not connected")
    edges = sorted(net.edges())
    target = n - 1
    chosen: list[tuple[int, int]] = []

    def search(i: int, comp: list[int]):
        if len(chosen) == target:
            yield _root(net.sink_id, n, chosen)
            return
        if i == len(edges):
            return
        u, v = edges[i]
        cu, cv = comp[u], comp[v]
        if cu != cv:
            chosen.append(edges[i])
            yield from search(i + 1, [cu if c == cv else c for c in comp])
            chosen.pop()
        if _connects(n, (chosen, edges[i + 1:])):
            yield from search(i + 1, comp)

    yield from search(0, list(range(n)))


def optimal_tree_lifetime(net: Network, em: EnergyModel, cap: int = DEFAULT_CAP) -> tuple[float, AggregationTree]:
    """Best single-tree lifetime over all spanning trees (first maximiser wins)."""
    best_life, best_tree = None, None
    for tree in enumerate_spanning_trees(net, cap):
        life = tree_lifetime(compute_stats(net, tree, em), net.sink_id)
        if best_life is None or life > best_life:
            best_life, best_tree = life, tree
            if life == UNBOUNDED:
                break
    return best_life, best_tree


def matrix_tree_count(n: int, edges, root: int = 0) -> int:
    """Number of spanning trees via Kirchhoff's theorem (exact Bareiss determinant)."""
    if n <= 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, v in edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    keep = [i for i in range(n) if i != root]
    m = [[lap[i][j] for j in keep] for i in keep]
    k = len(m)
    sign, prev = 1, 1
    for p in range(k - 1):
        if m[p][p] == 0:
            swap = next((r for r in range(p + 1, k) if m[r][p] != 0), None)
            if swap is None:
                return 0
            m[p], m[swap] = m[swap], m[p]
            sign = -sign
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) // prev
        prev = m[p][p]
    return sign * m[k - 1][k - 1]
