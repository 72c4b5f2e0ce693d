import itertools
import random

import pytest

from cliquepack import (
    ORDER_DEGREE,
    ORDER_NATURAL,
    ORDER_SCORE,
    Graph,
    build_ordering,
    clique_score,
    compute_node_scores,
    count_cliques,
    find_min,
    find_one,
    for_each_clique,
    orient,
)

from _support import (
    FIG2_TRIANGLES,
    brute_cliques,
    brute_scores,
    fig2_graph,
    ids,
    random_graph,
)


def _natural_dag(g):
    return orient(g, build_ordering(g, ORDER_NATURAL))


def test_fig2_streams_exactly_the_seven_triangles():
    g = fig2_graph()
    seen = []
    for_each_clique(_natural_dag(g), 3, seen.append)
    assert sorted(g.to_external(c) for c in seen) == sorted(FIG2_TRIANGLES)


def test_complete_graph_k5_has_ten_triangles():
    g = Graph.from_edges(itertools.combinations(range(5), 2))
    calls = []
    for_each_clique(_natural_dag(g), 3, calls.append)
    assert len(calls) == 10


def test_k_below_three_rejected():
    g = fig2_graph()
    with pytest.raises(ValueError):
        for_each_clique(_natural_dag(g), 2, lambda c: None)
    with pytest.raises(ValueError):
        compute_node_scores(_natural_dag(g), 2)


def test_uniqueness_and_counts_match_brute_force():
    rng = random.Random(5)
    for _ in range(40):
        g = random_graph(rng, rng.randint(4, 20), rng.uniform(0.1, 0.6))
        k = rng.choice([3, 4, 5])
        expected = sorted(brute_cliques(g, k))
        for kind in (ORDER_NATURAL, ORDER_DEGREE):
            og = orient(g, build_ordering(g, kind))
            seen = []
            for_each_clique(og, k, seen.append)
            assert sorted(seen) == expected
            assert sorted(set(seen)) == sorted(seen)  # no duplicates
            assert count_cliques(og, k) == len(expected)


def test_scores_fig2_and_sum_identity():
    g = fig2_graph()
    t = compute_node_scores(_natural_dag(g), 3)
    assert t.tau == 7
    assert t.s_n[g.id_of(6)] == 3
    assert t.s_n == brute_scores(g, 3)
    assert sum(t.s_n) == 3 * t.tau


def test_scores_k4_complete_graph_and_isolated_node():
    g = Graph.from_edges(itertools.combinations(range(4), 2), nodes=range(5))
    t = compute_node_scores(_natural_dag(g), 3)
    assert t.s_n[:4] == [3, 3, 3, 3]
    assert t.s_n[4] == 0


def test_scores_independent_of_ordering_and_thread_count():
    rng = random.Random(17)
    for _ in range(10):
        g = random_graph(rng, 18, 0.4)
        k = rng.choice([3, 4])
        tables = []
        for kind in (ORDER_NATURAL, ORDER_DEGREE):
            og = orient(g, build_ordering(g, kind))
            tables.append(compute_node_scores(og, k))
        tables.append(compute_node_scores(_natural_dag(g), k, threads=4))
        assert all(t.s_n == tables[0].s_n and t.tau == tables[0].tau for t in tables)


def test_clique_score_examples():
    g = fig2_graph()
    t = compute_node_scores(_natural_dag(g), 3)
    assert clique_score(ids(g, 5, 6, 8), t) == 9   # all three members in 3 triangles
    assert clique_score(ids(g, 1, 3, 6), t) == 6
    lone = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
    lt = compute_node_scores(_natural_dag(lone), 3)
    assert clique_score((0, 1, 2), lt) == 3


def test_find_one_from_v6_matches_walkthrough():
    g = fig2_graph()
    og = _natural_dag(g)
    assert g.to_external(find_one(og, 3, g.id_of(6))) == (3, 5, 6)


def test_find_one_insufficient_out_degree_is_absent():
    g = fig2_graph()
    og = _natural_dag(g)
    assert find_one(og, 3, g.id_of(5)) is None  # N+(v5) = {v3}


def test_find_one_on_residual_graph_finds_second_clique():
    g = fig2_graph()
    og = _natural_dag(g)
    for lab in (3, 5, 6):
        og.remove_node(g.id_of(lab))
    assert g.to_external(find_one(og, 3, g.id_of(9))) == (7, 8, 9)


def test_find_one_requires_valid_root():
    g = fig2_graph()
    og = _natural_dag(g)
    og.remove_node(0)
    with pytest.raises(ValueError):
        find_one(og, 3, 0)


def _score_dag(g, k):
    t = compute_node_scores(orient(g, build_ordering(g, ORDER_DEGREE)), k)
    og = orient(g, build_ordering(g, ORDER_SCORE, scores=t.s_n))
    return og, t


def test_find_min_at_top_endpoint_of_lowest_clique():
    g = fig2_graph()
    og, t = _score_dag(g, 3)
    # v6 is the highest-ranked member of the score-6 triangle (1, 3, 6)
    members, score = find_min(og, 3, g.id_of(6), t)
    assert score == 6
    assert g.to_external(members) == (1, 3, 6)


def test_find_min_absent_when_no_clique_in_neighborhood():
    g = fig2_graph()
    og, t = _score_dag(g, 3)
    assert find_min(og, 3, g.id_of(7), t) is None  # N+(v7) = {v5, v4}, not adjacent


def test_find_min_tie_break_modes_differ_deterministically():
    g = fig2_graph()
    og, t = _score_dag(g, 3)
    v8 = g.id_of(8)
    strict, s1 = find_min(og, 3, v8, t, strict_ties=True)
    relaxed, s2 = find_min(og, 3, v8, t, strict_ties=False)
    assert s1 == s2 == 9
    assert g.to_external(strict) == (5, 6, 8)    # canonical minimum
    assert g.to_external(relaxed) == (5, 7, 8)   # first encountered in scan order


def _brute_min_rooted(g, t, og, k, u):
    cand = og.out_neighbors(u)
    best = None
    for combo in itertools.combinations(cand, k - 1):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
            members = tuple(sorted(combo + (u,)))
            key = (clique_score(members, t), members)
            if best is None or key < best:
                best = key
    return best


def test_find_min_prune_exactness_against_brute_force():
    rng = random.Random(71)
    for _ in range(500):
        g = random_graph(rng, 20, 0.3)
        k = rng.choice([3, 4, 5])
        og, t = _score_dag(g, k)
        for u in range(g.n):
            if og.out_degree(u) < k - 1:
                continue
            pruned = find_min(og, k, u, t, pruning=True)
            plain = find_min(og, k, u, t, pruning=False)
            assert pruned == plain
            expected = _brute_min_rooted(g, t, og, k, u)
            if expected is None:
                assert pruned is None
            else:
                assert pruned == (expected[1], expected[0])
            rp = find_min(og, k, u, t, pruning=True, strict_ties=False)
            rn = find_min(og, k, u, t, pruning=False, strict_ties=False)
            assert rp == rn
            if expected is not None:
                assert rp[1] == expected[0]  # same minimum score either way
