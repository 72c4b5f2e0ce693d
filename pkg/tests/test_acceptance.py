"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Criteria 1, 2 and 8 need
the public datasets described in the README; they skip with instructions when
the files are absent.  Everything else is self-contained.
"""

import random
import time

import pytest

from cliquepack import (
    DynamicState,
    SolutionSet,
    UpdateOp,
    build_clique_graph,
    check_score_bounds,
    exact_mis,
    read_edge_list,
    replay,
    solve_gc,
    solve_hg,
    solve_lp,
    verify_maximal,
)
from cliquepack.cli import main, read_solution
from cliquepack.dynamic import DELETE, INSERT

from _support import fig2_graph, g1_graph, ids, random_graph, require_dataset

TABLE_COUNTS = {
    # displayed k-clique counts for k = 3, 4, 5, 6
    "football": ("810", "732", "473", "237"),
    "hamsterster": ("16.8K", "10K", "2.77K", "285"),
}

TABLE_PARITY = {
    # (dataset, k) -> (lp_size, opt_size)
    ("football", 5): (16, 16),
    ("football", 6): (11, 11),
    ("voles", 3): (48, 49),
    ("voles", 4): (30, 30),
    ("voles", 5): (18, 18),
    ("voles", 6): (13, 13),
    ("swallow", 3): (4, 4),
    ("swallow", 4): (2, 2),
    ("swallow", 5): (0, 0),
    ("swallow", 6): (0, 0),
    ("tortoise", 3): (6, 6),
    ("tortoise", 4): (2, 2),
    ("tortoise", 5): (1, 1),
    ("tortoise", 6): (1, 1),
}


def _display(count: int) -> str:
    """Three-significant-digit display with a K suffix, as the tables print."""
    if count < 1000:
        return str(count)
    y = count / 1000
    if y >= 100:
        s = f"{y:.0f}"
    elif y >= 10:
        s = f"{y:.1f}"
    else:
        s = f"{y:.2f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s + "K"


def test_c1_clique_count_regression(capsys):
    for name, expected in TABLE_COUNTS.items():
        path = require_dataset(name)
        for k, want in zip(range(3, 7), expected):
            t0 = time.perf_counter()
            assert main(["count", str(path), "--k", str(k)]) == 0
            elapsed = time.perf_counter() - t0
            out = capsys.readouterr().out
            tau = int(next(l for l in out.splitlines() if l.startswith("tau=")).split("=")[1])
            assert _display(tau) == want, f"{name} k={k}: tau={tau} displays as {_display(tau)}, table says {want}"
            assert elapsed < 2.0, f"{name} k={k} took {elapsed:.2f}s (budget 2s)"
    print("[C1] clique-count regression on Football and Hamsterster: PASS")


def test_c2_exact_parity_small_datasets():
    graphs = {}
    for (name, k), (lp_want, opt_want) in sorted(TABLE_PARITY.items()):
        if name not in graphs:
            graphs[name] = read_edge_list(require_dataset(name))
        g = graphs[name]
        t0 = time.perf_counter()
        lp = solve_lp(g, k)
        opt = exact_mis(build_clique_graph(g, k), time_budget=60.0)
        elapsed = time.perf_counter() - t0
        assert abs(lp.size - lp_want) <= 1, f"{name} k={k}: lp={lp.size}, table says {lp_want}"
        assert opt.size == opt_want, f"{name} k={k}: opt={opt.size}, table says {opt_want}"
        assert elapsed < 60.0, f"{name} k={k} took {elapsed:.1f}s (budget 60s)"
    print("[C2] LP/OPT parity on Swallow, Tortoise, Football, Voles: PASS")


def test_c3_degree_bound_property_suite():
    t0 = time.perf_counter()
    g = fig2_graph()
    rows = {r.clique: r for r in check_score_bounds(g, 3)}
    row = rows[ids(g, 1, 3, 6)]
    assert (row.lower, row.upper, row.degree) == (1.5, 3, 2)
    rng = random.Random(1003)
    for _ in range(1000):
        g = random_graph(rng, 15, 0.4)
        for k in (3, 4):
            check_score_bounds(g, k)  # raises on any violation
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"bound suite took {elapsed:.1f}s (budget 30s)"
    print(f"[C3] clique-degree bounds, 1000 graphs x k=3,4 + fixture: PASS ({elapsed:.1f}s)")


def test_c4_approximation_ratio_property_suite():
    t0 = time.perf_counter()
    rng = random.Random(1004)
    for _ in range(300):
        g = random_graph(rng, rng.randint(6, 25), rng.uniform(0.15, 0.55))
        k = rng.choice([3, 4])
        opt = exact_mis(build_clique_graph(g, k))
        for solver in (solve_hg, solve_gc, solve_lp):
            sol = solver(g, k)
            sol.validate(g, k)
            assert verify_maximal(g, k, sol)
            assert opt.size <= k * sol.size, (
                f"k-approximation violated: opt={opt.size}, {solver.__name__}={sol.size}, k={k}"
            )
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0, f"approximation suite took {elapsed:.1f}s (budget 5min)"
    print(f"[C4] k-approximation vs exact optimum, 300 graphs: PASS ({elapsed:.1f}s)")


def _equivalence_corpus():
    rng = random.Random(1005)
    for i in range(500):
        n = rng.randint(6, 40)
        p = rng.uniform(0.12, 0.5)
        k = (3, 4, 5)[i % 3]
        yield random_graph(rng, n, p), k


def test_c5_greedy_heap_equivalence():
    t0 = time.perf_counter()
    for g, k in _equivalence_corpus():
        gc = solve_gc(g, k)
        lp = solve_lp(g, k)
        assert gc.canonical() == lp.canonical(), (
            f"mismatch at n={g.n} k={k}: gc={gc.canonical()} lp={lp.canonical()}"
        )
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0, f"equivalence suite took {elapsed:.1f}s (budget 5min)"
    print(f"[C5] strict-tie GC == LP on 500 graphs: PASS ({elapsed:.1f}s)")


def test_c6_pruning_neutrality():
    t0 = time.perf_counter()
    for g, k in _equivalence_corpus():
        with_prune = solve_lp(g, k, pruning=True)
        without = solve_lp(g, k, pruning=False)
        assert with_prune.cliques == without.cliques, f"pruning changed output at n={g.n} k={k}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    print(f"[C6] pruning on == pruning off on 500 graphs: PASS ({elapsed:.1f}s)")


def test_c7_dynamic_soundness():
    t0 = time.perf_counter()
    # The two-triangles-plus-path scenario, reproduced exactly.
    g = g1_graph()
    state = DynamicState(g, 3, SolutionSet.from_cliques(
        g.n, [ids(g, 3, 4, 5), ids(g, 9, 10, 11)]
    ))
    assert state.size == 2
    u, v = g.id_of(5), g.id_of(7)
    g.insert_edge(u, v)
    state.apply_insert(u, v)
    assert state.size == 3
    state.check_consistency()
    g.delete_edge(u, v)
    state.apply_delete(u, v)
    final = {g.to_external(c) for c in state.solution().cliques}
    assert final == {(1, 2, 3), (9, 10, 11)}
    state.check_consistency()

    rng = random.Random(1007)
    for _ in range(100):
        n = rng.randint(12, 26)
        g = random_graph(rng, n, rng.uniform(0.15, 0.45))
        k = rng.choice([3, 4])
        st = DynamicState(g, k)
        ops = []
        for _ in range(200):
            a, b = rng.sample(range(n), 2)
            ops.append(UpdateOp(INSERT if rng.random() < 0.5 else DELETE, a, b))
        metrics = replay(st, ops, verify=True)  # asserts validity + index == rebuild per op
        assert not metrics.errors
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0, f"dynamic suite took {elapsed:.1f}s (budget 10min)"
    print(f"[C7] per-op soundness, 100 x 200-op streams + fixture scenario: PASS ({elapsed:.1f}s)")


def test_c8_dynamic_quality_band_vs_rebuild():
    for name in ("football", "hamsterster"):
        g = read_edge_list(require_dataset(name))
        rng = random.Random(1008)
        edges = list(g.edges())
        rng.shuffle(edges)
        to_reinsert = edges[:1000]
        to_delete = edges[1000:2000]
        for u, v in to_reinsert:
            g.delete_edge(u, v)
        state = DynamicState(g, 3)
        ops = [UpdateOp(INSERT, u, v) for u, v in to_reinsert] + [
            UpdateOp(DELETE, u, v) for u, v in to_delete
        ]
        rng.shuffle(ops)
        metrics = replay(state, ops)
        assert not metrics.errors
        fresh = solve_lp(g, 3)
        band = max(1.0, 0.05 * fresh.size)
        assert abs(state.size - fresh.size) <= band, (
            f"{name}: dynamic size {state.size} vs rebuild {fresh.size} (band {band:.1f})"
        )
        final = state.solution()
        final.validate(g, 3)
        assert verify_maximal(g, 3, final)
    print("[C8] 2000-op mixed workloads end within 5% of a rebuild: PASS")


def test_c9_desk_scale_smoke(tmp_path, capsys):
    t0 = time.perf_counter()
    graph_path = tmp_path / "ws.txt"
    sol_path = tmp_path / "ws.cliques"
    assert main(["gen", "--n", "100000", "--mean-degree", "16",
                 "--rewire-prob", "0.1", "--seed", "2024", "-o", str(graph_path)]) == 0
    assert main(["solve", str(graph_path), "--k", "4", "--algo", "lp",
                 "-o", str(sol_path)]) == 0
    capsys.readouterr()
    g = read_edge_list(graph_path)
    assert (g.n, g.m) == (100000, 800000)
    with open(sol_path) as fp:
        sol = read_solution(fp, g)
    sol.validate(g, 4)
    assert verify_maximal(g, 4, sol)
    assert sol.size > 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0, f"smoke took {elapsed:.1f}s (budget 5min)"
    print(f"[C9] generate + solve at n=100k, degree 16, k=4: PASS ({elapsed:.1f}s, size={sol.size})")
