import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsnagg.errors import Disconnected, Overdraft
from wsnagg.scheduler import (
    DISCONNECTED,
    SOURCE_DEAD,
    UNBOUNDED_CAUSE,
    ZERO_LIFETIME,
    apply_rounds,
    dumps_schedule,
    heuristic_schedule,
    sptbsa,
)
from wsnagg.spt import build_spt
from wsnagg.tree import UNBOUNDED, EnergyModel

from conftest import make_net, naive_stats, random_network


def test_apply_rounds_graph_a(graph_a, em):
    apply_rounds(graph_a, build_spt(graph_a), em, 11)
    assert graph_a.energies() == [100, 1, 12, 56]


def test_apply_rounds_leaf_relay_untouched(em):
    net = make_net([(0, 0, 10, 0), (1, 0, 7, 0)])
    apply_rounds(net, build_spt(net), em, 5)
    assert net.energies() == [10, 7]


def test_apply_rounds_preconditions(graph_a, em):
    tree = build_spt(graph_a)
    with pytest.raises(ValueError):
        apply_rounds(graph_a, tree, em, 0)
    with pytest.raises(Overdraft):
        apply_rounds(graph_a, tree, em, 12)
    assert graph_a.energies() == [100] * 4


def test_graph_a_schedule(graph_a, em):
    sched = heuristic_schedule(graph_a, em)
    assert [e.duration for e in sched.entries] == [11]
    assert sched.entries[0].bottleneck == 1
    assert sched.network_lifetime == 11
    # a has 1 unit left, below its own one-packet cost
    assert sched.cause == SOURCE_DEAD


def test_single_source_near_sink(em):
    net = make_net([(0, 0, 100_000, 0), (1, 0, 100_000, 1)])
    sched = heuristic_schedule(net, em)
    assert [e.duration for e in sched.entries] == [50_000]
    assert sched.cause == SOURCE_DEAD
    assert net.energies()[1] == 0


def test_no_sources_is_unbounded(em):
    net = make_net([(0, 0, 5, 0), (1, 0, 5, 0)])
    for run in (heuristic_schedule, sptbsa):
        sched = run(net.copy(), em)
        assert sched.unbounded and sched.cause == UNBOUNDED_CAUSE
        assert sched.network_lifetime == UNBOUNDED


def test_sptbsa_graph_b(em, graph_b):
    base = sptbsa(graph_b.copy(), em)
    heur = heuristic_schedule(graph_b.copy(), em)
    assert base.entries[0].duration == 6
    assert heur.entries[0].duration == 25


def test_path_graph_same_for_both(graph_a, em):
    assert dumps_schedule(sptbsa(graph_a.copy(), em)) == dumps_schedule(heuristic_schedule(graph_a.copy(), em))


def test_disconnected_at_start(em):
    # the only relay toward the source has no energy
    net = make_net([(0, 0, 5, 0), (2, 0, 0, 0), (4, 0, 50, 1)])
    with pytest.raises(Disconnected):
        heuristic_schedule(net, em)


def test_relay_death_disconnects(em):
    # relay 1 carries source 2; it dies before the source does
    net = make_net([(0, 0, 5, 0), (2, 0, 9, 0), (4, 0, 1000, 2)])
    sched = heuristic_schedule(net, em)
    assert sched.cause == DISCONNECTED
    assert sched.network_lifetime == 3  # relay spends 1 + 2 = 3 per round


def test_zero_lifetime_stop(em):
    # relay 1 keeps enough energy to be eligible but not to forward one round
    net = make_net([(0, 0, 5, 0), (2, 0, 5, 0), (4, 0, 1000, 2)])
    sched = sptbsa(net, em)
    assert sched.cause == ZERO_LIFETIME
    assert sched.network_lifetime == 1
    assert net.energies()[1] == 2


def test_schedule_dump_format(graph_a, em):
    assert dumps_schedule(heuristic_schedule(graph_a, em)) == "period 1 11 1\nlifetime 11 source_dead\n"


def replay(initial, sched, em):
    """Round-by-round re-run of the schedule's trees from initial energies."""
    energy = list(initial.energies())
    rounds = 0
    for entry in sched.entries:
        ran = 0
        while True:
            net = initial.copy()
            for n, e in zip(net.nodes, energy):
                n.energy = e
            costs = {u: s[2] for u, s in naive_stats(net, entry.tree, em).items() if u != net.sink_id}
            if any(energy[u] < c for u, c in costs.items()):
                break
            for u, c in costs.items():
                energy[u] -= c
                assert energy[u] >= 0
            ran += 1
        assert ran == entry.duration
        rounds += ran
    return energy, rounds


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_schedule_matches_naive_replay(seed):
    rng = np.random.default_rng(seed)
    net = random_network(rng, n_min=2, n_max=12, e_max=300, side=4.0)
    em = EnergyModel(int(rng.integers(2, 4)), 2, 1)
    for run in (heuristic_schedule, sptbsa):
        work = net.copy()
        try:
            sched = run(work, em)
        except Disconnected:
            return
        if sched.unbounded:
            continue
        energy, rounds = replay(net, sched, em)
        assert energy == work.energies()
        assert rounds == sched.network_lifetime
