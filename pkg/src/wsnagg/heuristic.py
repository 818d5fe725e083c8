"""Lifetime-balancing rewrite of a shortest path tree.

Two stages run on the BFS tree:

1. *leafify*: internal nodes whose residual energy is at most
   ``theta * median(residual)`` hand all their children to other
   neighbors one hop closer to the sink, so they stop relaying.
2. *local adjust*: every node may switch to another parent one hop closer
   to the sink when that strictly raises the minimum lifetime over the
   nodes whose load changes.

Both stages only move a node to a parent on the same hop level as the old
one, so hop counts never change, and neither stage ever lowers the tree
lifetime.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidConfig
from .network import Network
from .spt import build_spt
from .tree import UNBOUNDED, AggregationTree, EnergyModel, check_tree


@dataclass(frozen=True)
class HeuristicParams:
    theta: float = 0.1
    max_passes: int = 10

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise InvalidConfig("theta must lie in [0, 1]")
        if self.max_passes < 1:
            raise InvalidConfig("max_passes must be >= 1")


class _TreeState:
    """Mutable tree with cached per-node load, packets and lifetime.

    ``csum[a]`` is the number of packets ``a`` receives per round (sum of its
    children's packet counts), so ``eng(a) = e_rx * csum[a] + e_tx * delta[a]``.
    """

    def __init__(self, net: Network, tree: AggregationTree, em: EnergyModel):
        n = len(net)
        self.net = net
        self.em = em
        self.sink = tree.sink
        self.energy = [node.energy for node in net.nodes]
        self.members = tree.nodes
        self.hop = [-1] * n
        self.parent = [-1] * n
        self.children: list[set[int]] = [set() for _ in range(n)]
        for u, h in tree.hop.items():
            self.hop[u] = h
        for u, p in tree.parent.items():
            self.parent[u] = p
            self.children[p].add(u)
        self.tot = [0] * n
        self.delta = [0] * n
        self.csum = [0] * n
        self.life: list[float] = [UNBOUNDED] * n
        for u in sorted(self.members, key=lambda a: -self.hop[a]):
            self.tot[u] = net.nodes[u].rho + sum(self.tot[c] for c in self.children[u])
            self.delta[u] = em.packets(self.tot[u])
            self.csum[u] = sum(self.delta[c] for c in self.children[u])
            self.life[u] = self._life(u, self.delta[u], self.csum[u])

    def _life(self, a: int, delta: int, csum: int) -> float:
        if a == self.sink:
            return UNBOUNDED
        eng = self.em.e_rx * csum + self.em.e_tx * delta
        return self.energy[a] // eng if eng > 0 else UNBOUNDED

    def in_tree(self, a: int) -> bool:
        return self.hop[a] >= 0

    def tree_min(self) -> float:
        return min((self.life[a] for a in self.members if a != self.sink), default=UNBOUNDED)

    def alternatives(self, u: int, exclude: int) -> list[int]:
        """Tree neighbors of ``u`` one hop closer to the sink, except ``exclude``."""
        want = self.hop[u] - 1
        hop = self.hop
        return [w for w in self.net.adjacent(u) if w != exclude and hop[w] == want]

    def evaluate_move(self, u: int, v: int):
        """Effect of re-parenting ``u`` under ``v`` (same hop as its parent).

        Returns ``(before, after, changes)``: the minimum lifetime over the
        affected nodes (both ancestor chains up to and including their lowest
        common ancestor) before and after, and the new
        ``(node, tot, delta, csum, life)`` values.
        """
        parent, tot, delta, csum, life = self.parent, self.tot, self.delta, self.csum, self.life
        packets = self.em.packets
        x = parent[u]
        tu, du = tot[u], delta[u]
        changes = []
        before = UNBOUNDED
        after = UNBOUNDED

        a, b = x, v
        # (old, new) packet count of the chain child on each side
        xo, xn = du, 0
        vo, vn = 0, du
        while a != b:
            t = tot[a] - tu
            d = packets(t)
            s = csum[a] - xo + xn
            lf = self._life(a, d, s)
            changes.append((a, t, d, s, lf))
            before = min(before, life[a])
            after = min(after, lf)
            xo, xn = delta[a], d

            t = tot[b] + tu
            d = packets(t)
            s = csum[b] - vo + vn
            lf = self._life(b, d, s)
            changes.append((b, t, d, s, lf))
            before = min(before, life[b])
            after = min(after, lf)
            vo, vn = delta[b], d

            a, b = parent[a], parent[b]
        # a == b is the lowest common ancestor; its load is unchanged
        s = csum[a] - xo + xn - vo + vn
        lf = self._life(a, delta[a], s)
        changes.append((a, tot[a], delta[a], s, lf))
        before = min(before, life[a])
        after = min(after, lf)
        return before, after, changes

    def apply_move(self, u: int, v: int, changes=None) -> None:
        if changes is None:
            changes = self.evaluate_move(u, v)[2]
        x = self.parent[u]
        self.children[x].discard(u)
        self.children[v].add(u)
        self.parent[u] = v
        for a, t, d, s, lf in changes:
            self.tot[a] = t
            self.delta[a] = d
            self.csum[a] = s
            self.life[a] = lf

    def to_tree(self) -> AggregationTree:
        return AggregationTree.from_parents(
            self.sink, {u: self.parent[u] for u in self.members if u != self.sink}
        )


def _leafify(state: _TreeState, p: HeuristicParams) -> None:
    sink = state.sink
    others = [u for u in state.members if u != sink]
    if not others:
        return
    limit = p.theta * statistics.median(state.energy[u] for u in others)
    candidates = sorted(
        (u for u in others if state.children[u] and state.energy[u] <= limit),
        key=lambda u: (state.energy[u], u),
    )
    leafified: set[int] = set()
    for u in candidates:
        if not state.children[u]:
            continue
        before = state.tree_min()
        journal = []
        complete = True
        for c in sorted(state.children[u]):
            best = None
            for w in state.alternatives(c, exclude=u):
                if w in leafified:
                    continue
                _, _, changes = state.evaluate_move(c, w)
                w_life = changes[1][4]  # entry 0 is the old parent, entry 1 is w
                if best is None or w_life > best[0]:
                    best = (w_life, w, changes)
            if best is None:
                complete = False
                break
            state.apply_move(c, best[1], best[2])
            journal.append(c)
        if complete and state.tree_min() >= before:
            leafified.add(u)
        else:
            for c in reversed(journal):
                state.apply_move(c, u)


def _adjust(state: _TreeState, p: HeuristicParams) -> bool:
    """Run parent-switch passes; True if the last pass changed nothing."""
    order = sorted((u for u in state.members if state.hop[u] >= 2), key=lambda u: (state.hop[u], u))
    for _ in range(p.max_passes):
        changed = False
        for u in order:
            best = None
            for v in state.alternatives(u, exclude=state.parent[u]):
                before, after, changes = state.evaluate_move(u, v)
                if after > before and (best is None or after > best[0]):
                    best = (after, v, changes)
            if best is not None:
                state.apply_move(u, best[1], best[2])
                changed = True
        if not changed:
            return True
    return False


def leafify_low_energy(net: Network, tree: AggregationTree, em: EnergyModel,
                       p: HeuristicParams = HeuristicParams()) -> AggregationTree:
    """Turn low-energy internal nodes into leaves where all children can move.

    A candidate's children are re-attached one at a time, each to the
    alternative parent with the best resulting lifetime. The candidate is
    committed only if every child found a new parent and the tree lifetime
    did not drop; otherwise all of its moves are undone.
    """
    check_tree(net, tree)
    state = _TreeState(net, tree, em)
    _leafify(state, p)
    return state.to_tree()


def local_adjust(net: Network, tree: AggregationTree, em: EnergyModel,
                 p: HeuristicParams = HeuristicParams()) -> AggregationTree:
    check_tree(net, tree)
    state = _TreeState(net, tree, em)
    _adjust(state, p)
    return state.to_tree()


def build_max_lifetime_tree(net: Network, em: EnergyModel,
                            p: HeuristicParams = HeuristicParams(),
                            eligible: Iterable[int] | None = None) -> AggregationTree:
    """BFS tree, then leafify, then local adjustment."""
    state = _TreeState(net, build_spt(net, eligible), em)
    _leafify(state, p)
    _adjust(state, p)
    return state.to_tree()
