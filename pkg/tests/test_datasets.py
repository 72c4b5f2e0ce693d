"""Checks that need the public datasets (see README / data directory).

Each test skips with download instructions when its dataset file is absent.
"""

import random

from cliquepack import (
    DynamicState,
    UpdateOp,
    build_clique_graph,
    exact_mis,
    read_edge_list,
    replay,
    solve_hg,
    solve_lp,
    verify_maximal,
)
from cliquepack.dynamic import DELETE, INSERT

from _support import require_dataset


def test_football_shape_and_hg_quality():
    g = read_edge_list(require_dataset("football"))
    assert (g.n, g.m) == (115, 613)
    sol = solve_hg(g, 5)
    sol.validate(g, 5)
    assert verify_maximal(g, 5, sol)
    # The ordered-framework size depends on the (unpinned) ordering details;
    # it must still be within the k-approximation band of the optimum.
    opt = exact_mis(build_clique_graph(g, 5))
    assert sol.size <= opt.size <= 5 * sol.size
    assert abs(sol.size - 16) <= 2


def test_football_short_mixed_replay_stays_near_rebuild():
    g = read_edge_list(require_dataset("football"))
    state = DynamicState(g, 3)
    rng = random.Random(2024)
    ops = []
    for _ in range(200):
        u, v = rng.sample(range(g.n), 2)
        ops.append(UpdateOp(INSERT if rng.random() < 0.5 else DELETE, u, v))
    metrics = replay(state, ops)
    assert not metrics.errors
    fresh = solve_lp(g, 3)
    assert fresh.size - 5 <= state.size <= fresh.size + 5
    final = state.solution()
    final.validate(g, 3)
    assert verify_maximal(g, 3, final)
