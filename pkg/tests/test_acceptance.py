"""Exit criteria. Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line."""
import time

import numpy as np
import pytest
from scipy.stats import spearmanr

from wsnagg.cli import main
from wsnagg.errors import Disconnected
from wsnagg.experiment import ExperimentConfig, run_experiment
from wsnagg.heuristic import HeuristicParams, build_max_lifetime_tree, leafify_low_energy, local_adjust
from wsnagg.network import DeploymentConfig
from wsnagg.oracle import enumerate_spanning_trees, matrix_tree_count, optimal_tree_lifetime
from wsnagg.scheduler import heuristic_schedule, sptbsa
from wsnagg.spt import build_spt
from wsnagg.tree import AggregationTree, EnergyModel, compute_stats, evaluate, tree_lifetime, validate_tree

from conftest import naive_stats, random_network


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def test_1_equation_suite(graph_a, em, report):
    start = time.perf_counter()
    stats = compute_stats(graph_a, AggregationTree.from_parents(0, {1: 0, 2: 1, 3: 2}), em)
    life = tree_lifetime(stats, 0)
    elapsed = time.perf_counter() - start
    got = tuple(tuple(getattr(stats[u], f) for u in (1, 2, 3)) for f in ("tot", "delta", "eng", "life"))
    want = ((6, 5, 3), (3, 3, 2), (9, 8, 4), (11, 12, 25))
    ok = got == want and life == 11 and elapsed < 1.0
    report(1, ok, f"stats={got} tree_lifetime={life} in {elapsed:.4f}s")
    assert got == want
    assert life == 11
    assert elapsed < 1.0


def test_2_oracle_soundness(report):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    bad = []
    for i in range(200):
        net = random_network(rng, n_min=1, n_max=7, e_max=100)
        em = EnergyModel(alpha=int(rng.choice([2, 3])), e_tx=2, e_rx=1)
        spt = evaluate(net, build_spt(net), em)
        heur = evaluate(net, build_max_lifetime_tree(net, em), em)
        best, _ = optimal_tree_lifetime(net, em)
        if not (spt <= heur <= best):
            bad.append((i, spt, heur, best))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(2, ok, f"200 instances, violations={len(bad)}, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_3_spanning_tree_counts(report):
    rng = np.random.default_rng(3)
    mismatches = []
    for i in range(50):
        net = random_network(rng, n_min=1, n_max=8)
        enumerated = sum(1 for _ in enumerate_spanning_trees(net))
        kirchhoff = matrix_tree_count(len(net), net.edges(), root=net.sink_id)
        if enumerated != kirchhoff:
            mismatches.append((i, enumerated, kirchhoff))
    report(3, not mismatches, f"50 graphs, mismatches={len(mismatches)}")
    assert not mismatches


def _replay(initial, sched, em):
    """Naive round-at-a-time simulator over the schedule's tree sequence."""
    energy = initial.energies()
    sink = initial.sink_id
    rounds = 0
    for entry in sched.entries:
        costs = {u: s[2] for u, s in naive_stats(initial, entry.tree, em).items() if u != sink}
        ran = 0
        while all(energy[u] >= c for u, c in costs.items()):
            for u, c in costs.items():
                energy[u] -= c
            if min(energy) < 0:
                return None, None, False
            ran += 1
        if ran != entry.duration:
            return None, None, False
        rounds += ran
    return energy, rounds, True


def test_4_scheduler_conservation(report):
    rng = np.random.default_rng(4)
    failures = []
    checked = 0
    while checked < 100:
        net = random_network(rng, n_min=2, n_max=50, e_min=500, e_max=2000)
        em = EnergyModel(alpha=int(rng.choice([2, 3])), e_tx=2, e_rx=1)
        for name, run in (("heuristic", heuristic_schedule), ("sptbsa", sptbsa)):
            work = net.copy()
            try:
                sched = run(work, em)
            except Disconnected:
                continue
            if sched.unbounded:
                continue
            energy, rounds, ok = _replay(net, sched, em)
            if not ok or energy != work.energies() or rounds != sched.network_lifetime \
                    or min(work.energies()) < 0:
                failures.append((checked, name))
        checked += 1
    report(4, not failures, f"100 networks x 2 schedulers replayed, failures={len(failures)}")
    assert not failures


@pytest.fixture(scope="module")
def fig1_sweep():
    cfg = ExperimentConfig(
        node_counts=[200, 400, 600, 800, 1000],
        replications=30,
        deployment=DeploymentConfig(n_relays=50, comm_range=2.0, energy_init=100_000, rho_range=(1, 10)),
        energy_model=EnergyModel(alpha=2, e_tx=2, e_rx=1),
        heuristic=HeuristicParams(theta=0.1, max_passes=10),
        base_seed=0,
    )
    start = time.perf_counter()
    _, summary = run_experiment(cfg)
    return summary, time.perf_counter() - start


def _means(summary, algo):
    rows = [s for s in summary if s["algo"] == algo]
    return [s["node_count"] for s in rows], [s["mean_lifetime"] for s in rows]


@pytest.mark.parametrize("algo", ["heuristic", "sptbsa"])
def test_5a_lifetime_decreases_with_node_count(fig1_sweep, algo, report):
    summary, elapsed = fig1_sweep
    counts, means = _means(summary, algo)
    rho = spearmanr(counts, means).statistic
    ok = rho <= -0.8 and elapsed < 600
    report("5a", ok, f"{algo} means={[round(m, 1) for m in means]} spearman={rho:.2f} sweep={elapsed:.0f}s")
    assert rho <= -0.8
    assert elapsed < 600


def test_5b_heuristic_beats_sptbsa(fig1_sweep, report):
    summary, _ = fig1_sweep
    _, heur = _means(summary, "heuristic")
    _, base = _means(summary, "sptbsa")
    ok = all(h >= b for h, b in zip(heur, base))
    report("5b", ok, f"heuristic={[round(m, 1) for m in heur]} sptbsa={[round(m, 1) for m in base]}")
    assert ok


def test_6_cli_determinism(tmp_path, report):
    small = tmp_path / "small.txt"
    small.write_text("net 2.0 10 10 0\nnode 0 0 0 1000 0\nnode 1 2 0 50 1\n"
                     "node 2 0 2 1000 0\nnode 3 2 2 1000 4\n")
    net = tmp_path / "net.txt"
    commands = {
        "gen": ["gen", "--nodes", "150", "--seed", "42"],
        "simulate-heuristic": ["simulate", str(net), "--algo", "heuristic"],
        "simulate-sptbsa": ["simulate", str(net), "--algo", "sptbsa"],
        "oracle": ["oracle", str(small)],
        "experiment": ["experiment", "--nodes", "100,150", "--replications", "2", "--seed", "9"],
    }
    assert main(commands["gen"] + ["--out", str(net)]) == 0
    differing = []
    for name, argv in commands.items():
        outputs = []
        for k in range(2):
            out = tmp_path / f"{name}.{k}"
            assert main(argv + ["--out", str(out)]) == 0
            outputs.append(out.read_bytes())
        if outputs[0] != outputs[1] or not outputs[0]:
            differing.append(name)
    report(6, not differing, f"{len(commands)} commands run twice, differing={differing}")
    assert not differing


def test_7_heuristic_invariants(report):
    rng = np.random.default_rng(7)
    problems = []
    for i in range(500):
        net = random_network(rng, n_min=1, n_max=20, e_max=500)
        em = EnergyModel(alpha=int(rng.choice([2, 3])), e_tx=2, e_rx=1)
        p = HeuristicParams(theta=float(rng.choice([0.1, 0.5, 1.0])), max_passes=500)
        spt = build_spt(net)
        leaf = leafify_low_energy(net, spt, em, p)
        adj = local_adjust(net, leaf, em, p)
        if any(validate_tree(net, t) for t in (spt, leaf, adj)):
            problems.append((i, "invalid"))
        if leaf.hop != spt.hop or adj.hop != spt.hop:
            problems.append((i, "hop"))
        if local_adjust(net, adj, em, p) != adj:
            problems.append((i, "idempotence"))
        if evaluate(net, adj, em) < evaluate(net, spt, em):
            problems.append((i, "monotone"))
    report(7, not problems, f"500 instances, problems={problems[:5]}")
    assert not problems
