"""Unit-disk graph model of a sensor deployment and its random generator.

Randomness comes from numpy's PCG64 bit generator. Every seed is expanded
through ``numpy.random.SeedSequence`` so derived seeds (per retry attempt,
per experiment cell) are a stable hash of integer tuples and reproduce on
any platform.
"""
from __future__ import annotations

import copy
import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import (
    ConnectivityFailure,
    FormatError,
    InvalidConfig,
    SinkNotEligible,
    UnknownNode,
)

SOURCE = "source"
RELAY = "relay"
SINK = "sink"

MAX_ATTEMPTS = 1000


@dataclass(slots=True)
class NodeRecord:
    id: int
    x: float
    y: float
    energy: int
    rho: int
    kind: str


@dataclass
class DeploymentConfig:
    n_total: int = 200
    n_relays: int = 50
    field: tuple[float, float] = (10.0, 10.0)
    comm_range: float = 2.0
    energy_init: int = 100_000
    rho_range: tuple[int, int] = (1, 10)
    seed: int = 0

    def validate(self) -> None:
        if not (self.n_total >= self.n_relays >= 0):
            raise InvalidConfig(f"need n_total >= n_relays >= 0, got {self.n_total}, {self.n_relays}")
        if self.comm_range <= 0:
            raise InvalidConfig("comm_range must be positive")
        lo, hi = self.rho_range
        if lo < 1 or hi < lo:
            raise InvalidConfig(f"bad rho_range {self.rho_range}")
        if self.energy_init < 0:
            raise InvalidConfig("energy_init must be non-negative")
        if self.field[0] <= 0 or self.field[1] <= 0:
            raise InvalidConfig("field dimensions must be positive")
        if self.seed < 0:
            raise InvalidConfig("seed must be a non-negative integer")


def derive_seed(*parts: int) -> int:
    """Stable 64-bit seed derived from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(1, dtype=np.uint64)
    return int(state[0])


@dataclass
class Network:
    """Sensor nodes, the sink, and the unit-disk adjacency they induce.

    Positions are fixed after construction; only ``energy`` on the node
    records changes (during scheduling).
    """

    nodes: list[NodeRecord]
    sink_id: int
    comm_range: float
    field_size: tuple[float, float] = (10.0, 10.0)
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.nodes = sorted(self.nodes, key=lambda n: n.id)
        ids = [n.id for n in self.nodes]
        if ids != list(range(len(ids))):
            raise InvalidConfig("node ids must be unique and cover 0..n-1")
        if not (0 <= self.sink_id < len(ids)):
            raise InvalidConfig(f"sink id {self.sink_id} not among nodes")
        if self.comm_range <= 0:
            raise InvalidConfig("comm_range must be positive")
        for n in self.nodes:
            if n.energy < 0 or n.rho < 0:
                raise InvalidConfig(f"node {n.id}: negative energy or rho")
            if n.id == self.sink_id:
                if n.rho != 0 or n.kind != SINK:
                    raise InvalidConfig("sink must have rho = 0 and kind 'sink'")
            elif n.kind != (SOURCE if n.rho > 0 else RELAY):
                raise InvalidConfig(f"node {n.id}: kind {n.kind!r} inconsistent with rho={n.rho}")
        self._adj = _unit_disk_adjacency(self.nodes, self.comm_range)

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, u: int) -> NodeRecord:
        if not (0 <= u < len(self.nodes)):
            raise UnknownNode(u)
        return self.nodes[u]

    def adjacent(self, u: int) -> tuple[int, ...]:
        """Neighbors of ``u`` in ascending id order."""
        if not (0 <= u < len(self.nodes)):
            raise UnknownNode(u)
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and v in self.adjacent(u)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self._adj) for v in nbrs if u < v]

    @property
    def sources(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == SOURCE]

    @property
    def relays(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == RELAY]

    def energies(self) -> list[int]:
        return [n.energy for n in self.nodes]

    def copy(self) -> Network:
        """Independent copy (energies can then be drained separately)."""
        new = copy.copy(self)
        new.nodes = [copy.copy(n) for n in self.nodes]
        return new


def _unit_disk_adjacency(nodes: list[NodeRecord], comm_range: float) -> tuple[tuple[int, ...], ...]:
    if not nodes:
        return ()
    xy = np.array([(n.x, n.y) for n in nodes], dtype=float)
    dist = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    close = dist <= comm_range
    np.fill_diagonal(close, False)
    return tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in close)


def neighbors(net: Network, u: int) -> set[int]:
    """All nodes within ``comm_range`` of ``u`` (boundary inclusive)."""
    return set(net.adjacent(u))


def reachable(net: Network, eligible: Iterable[int]) -> set[int]:
    """Eligible nodes reachable from the sink through eligible nodes only."""
    allowed = set(eligible)
    if net.sink_id not in allowed:
        raise SinkNotEligible(net.sink_id)
    seen = {net.sink_id}
    queue = deque([net.sink_id])
    while queue:
        u = queue.popleft()
        for v in net.adjacent(u):
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def is_connected(net: Network, eligible: Iterable[int] | None = None) -> bool:
    allowed = set(range(len(net))) if eligible is None else set(eligible)
    return reachable(net, allowed) == allowed


def generate_network(cfg: DeploymentConfig) -> Network:
    """Random connected deployment with the sink at the field center.

    Node 0 is the sink; ids 1..n_total are sensors in draw order, of which
    a random subset of ``n_relays`` are relays. Disconnected draws are
    rejected and redrawn from ``derive_seed(seed, attempt)``.
    """
    cfg.validate()
    w, h = cfg.field
    lo, hi = cfg.rho_range
    n_sources = cfg.n_total - cfg.n_relays
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.Generator(np.random.PCG64(derive_seed(cfg.seed, attempt)))
        xs = rng.uniform(0.0, w, cfg.n_total)
        ys = rng.uniform(0.0, h, cfg.n_total)
        relay_mask = np.zeros(cfg.n_total, dtype=bool)
        relay_mask[rng.permutation(cfg.n_total)[: cfg.n_relays]] = True
        rhos = rng.integers(lo, hi, size=n_sources, endpoint=True)

        nodes = [NodeRecord(0, w / 2, h / 2, cfg.energy_init, 0, SINK)]
        src_iter = iter(rhos)
        for i in range(cfg.n_total):
            if relay_mask[i]:
                nodes.append(NodeRecord(i + 1, float(xs[i]), float(ys[i]), cfg.energy_init, 0, RELAY))
            else:
                rho = int(next(src_iter))
                nodes.append(NodeRecord(i + 1, float(xs[i]), float(ys[i]), cfg.energy_init, rho, SOURCE))
        net = Network(nodes, sink_id=0, comm_range=cfg.comm_range, field_size=(w, h))
        if is_connected(net):
            return net
    raise ConnectivityFailure(f"no connected deployment after {MAX_ATTEMPTS} draws (seed={cfg.seed})")


# --- text format -----------------------------------------------------------

def write_network(net: Network, fh: TextIO) -> None:
    w, h = net.field_size
    fh.write(f"net {net.comm_range!r} {w!r} {h!r} {net.sink_id}\n")
    for n in net.nodes:
        fh.write(f"node {n.id} {n.x!r} {n.y!r} {n.energy} {n.rho}\n")


def dumps_network(net: Network) -> str:
    buf = io.StringIO()
    write_network(net, buf)
    return buf.getvalue()


def read_network(fh: TextIO | Iterable[str]) -> Network:
    header = None
    nodes: list[NodeRecord] = []
    for lineno, raw in enumerate(fh, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "net" and len(parts) == 5:
                if header is not None:
                    raise FormatError(f"line {lineno}: duplicate net header")
                header = (float(parts[1]), float(parts[2]), float(parts[3]), int(parts[4]))
            elif parts[0] == "node" and len(parts) == 6:
                nid, energy, rho = int(parts[1]), int(parts[4]), int(parts[5])
                nodes.append(NodeRecord(nid, float(parts[2]), float(parts[3]), energy, rho, ""))
            else:
                raise FormatError(f"line {lineno}: unrecognised record {line!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise FormatError("missing 'net' header line")
    comm_range, fw, fh_, sink_id = header
    for n in nodes:
        n.kind = SINK if n.id == sink_id else (SOURCE if n.rho > 0 else RELAY)
    net = Network(nodes, sink_id=sink_id, comm_range=comm_range, field_size=(fw, fh_))
    if not is_connected(net):
        raise ConnectivityFailure("loaded network is not connected")
    return net


def loads_network(text: str) -> Network:
    return read_network(text.splitlines())

