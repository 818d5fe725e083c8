import numpy as np
import pytest
from hypothesis import strategies as st

from wsnagg.network import RELAY, SINK, SOURCE, Network, NodeRecord, is_connected
from wsnagg.tree import UNBOUNDED, EnergyModel


def make_net(spec, comm_range=2.0, sink=0):
    """spec: list of (x, y, energy, rho); index is the node id."""
    nodes = []
    for i, (x, y, energy, rho) in enumerate(spec):
        kind = SINK if i == sink else (SOURCE if rho > 0 else RELAY)
        nodes.append(NodeRecord(i, float(x), float(y), energy, rho, kind))
    return Network(nodes, sink_id=sink, comm_range=comm_range)


@pytest.fixture
def em():
    return EnergyModel(alpha=2, e_tx=2, e_rx=1)


@pytest.fixture
def graph_a():
    # path sink - a - b - c, ids 0..3
    return make_net([(0, 0, 100, 0), (2, 0, 100, 1), (4, 0, 100, 2), (6, 0, 100, 3)])


def graph_b_net(e_x=50, e_v=1000, e_u=1000, rho_x=1, rho_v=0, rho_u=4):
    # square s(0), x(1), v(2), u(3): edges s-x, s-v, x-u, v-u; diagonals exceed the range
    return make_net([(0, 0, 1000, 0), (2, 0, e_x, rho_x), (0, 2, e_v, rho_v), (2, 2, e_u, rho_u)])


@pytest.fixture
def graph_b():
    return graph_b_net()


def random_network(rng, n_min=1, n_max=7, e_max=100, rho_max=5, side=None, p_source=0.6, e_min=0):
    """Random connected unit-disk network; positions are redrawn until connected."""
    n = int(rng.integers(n_min, n_max + 1))
    field = side if side is not None else max(2.0, np.sqrt(n))
    rhos = [0 if i == 0 or rng.random() > p_source else int(rng.integers(1, rho_max + 1)) for i in range(n)]
    energies = [int(e) for e in rng.integers(e_min, e_max + 1, size=n)]
    while True:
        xs = rng.uniform(0, field, n)
        ys = rng.uniform(0, field, n)
        net = make_net(list(zip(xs, ys, energies, rhos)), comm_range=1.5)
        if is_connected(net):
            return net


@st.composite
def small_networks(draw, n_max=7, e_max=100):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_network(np.random.default_rng(seed), n_max=n_max, e_max=e_max)


def naive_stats(net, tree, em):
    """Direct recursive evaluation of load, packets, energy and lifetime."""
    def tot(u):
        return net.nodes[u].rho + sum(tot(c) for c in tree.children.get(u, []))

    def packets(u):
        t = tot(u)
        return t // em.alpha + (1 if t % em.alpha else 0)

    out = {}
    for u in tree.hop:
        if u == tree.sink:
            out[u] = (tot(u), packets(u), 0, UNBOUNDED)
            continue
        eng = em.e_rx * sum(packets(c) for c in tree.children.get(u, [])) + em.e_tx * packets(u)
        life = net.nodes[u].energy // eng if eng else UNBOUNDED
        out[u] = (tot(u), packets(u), eng, life)
    return out
