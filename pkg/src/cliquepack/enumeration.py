"""Streaming k-clique enumeration over an oriented graph, plus score machinery.

Every routine here walks the DAG the same way: from a root node ``u`` it
recursively intersects candidate sets with out-neighborhoods, so each clique
is visited exactly once, at the root with the largest rank.  Children are
always visited in out-list order; that is the single source of determinism
for everything built on top.  All operations are read-only and may be called
concurrently from many threads on disjoint roots.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .graph import OrientedGraph

Clique = tuple[int, ...]


@dataclass
class NodeScoreTable:
    """Per-node k-clique membership counts and the total clique count tau."""

    s_n: list[int]
    tau: int
    k: int


def _check_k(k: int) -> None:
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")


def for_each_clique(og: OrientedGraph, k: int, visitor: Callable[[Clique], None]) -> None:
    """Invoke ``visitor`` exactly once per distinct k-clique, in canonical form.

    Cliques are streamed; nothing is materialized beyond the visitor call.
    """
    _check_k(k)
    for u in range(og.n):
        if og.is_valid(u):
            cand = og.out_neighbors(u)
            if len(cand) >= k - 1:
                _stream(og, k - 1, cand, [u], visitor)


def _stream(og, l, cand, stack, visitor):
    if l == 2:
        in_cand = set(cand).__contains__
        out = og.out_neighbors
        for x in cand:
            for y in out(x):
                if in_cand(y):
                    members = stack + [x, y]
                    members.sort()
                    visitor(tuple(members))
    else:
        osets = og._osets
        for x in cand:
            oset = osets[x]
            sub = [y for y in cand if y in oset]
            if len(sub) >= l - 1:
                stack.append(x)
                _stream(og, l - 1, sub, stack, visitor)
                stack.pop()


def compute_node_scores(og: OrientedGraph, k: int, threads: int = 1) -> NodeScoreTable:
    """Count, for every node, the k-cliques containing it (exact, streaming).

    Memory beyond the output table is bounded by the recursion depth.  With
    ``threads > 1`` roots are processed in chunks with per-chunk partial
    tables merged by summation; the result is independent of thread count.
    """
    _check_k(k)
    n = og.n
    if threads <= 1 or n < 2 * threads:
        s = [0] * n
        tau = _count_roots(og, k, range(n), s)
        return NodeScoreTable(s, tau, k)

    chunk = (n + threads - 1) // threads
    ranges = [range(i, min(i + chunk, n)) for i in range(0, n, chunk)]

    def job(r):
        part = [0] * n
        t = _count_roots(og, k, r, part)
        return t, part

    s = [0] * n
    tau = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for t, part in pool.map(job, ranges):
            tau += t
            for i, v in enumerate(part):
                if v:
                    s[i] += v
    return NodeScoreTable(s, tau, k)


def _count_roots(og, k, roots, s):
    tau = 0
    for u in roots:
        if og.is_valid(u):
            cand = og.out_neighbors(u)
            if len(cand) >= k - 1:
                c = _count(og, k - 1, cand, s)
                if c:
                    s[u] += c
                    tau += c
    return tau


def _count(og, l, cand, s):
    total = 0
    if l == 2:
        in_cand = set(cand).__contains__
        out = og.out_neighbors
        for x in cand:
            c = 0
            for y in out(x):
                if in_cand(y):
                    s[y] += 1
                    c += 1
            if c:
                s[x] += c
                total += c
    else:
        osets = og._osets
        for x in cand:
            sub = [y for y in cand if y in osets[x]]
            if len(sub) >= l - 1:
                c = _count(og, l - 1, sub, s)
                if c:
                    s[x] += c
                    total += c
    return total


def clique_score(c: Sequence[int], t: NodeScoreTable) -> int:
    """Sum of the member node scores (Theorem-2 surrogate for clique degree)."""
    s = t.s_n
    return sum(s[u] for u in c)


def find_one(og: OrientedGraph, k: int, u: int) -> Clique | None:
    """First k-clique containing ``u`` in deterministic scan order, if any.

    Terminates immediately on the first success; the search space is
    ``{u} | N+(u)`` so the result's highest-ranked member is ``u``.
    """
    if not og.is_valid(u):
        raise ValueError(f"find_one requires a valid root, got removed node {u}")
    cand = og.out_neighbors(u)
    if len(cand) < k - 1:
        return None
    found = _find_one(og, k - 1, cand, [u])
    if found is None:
        return None
    return tuple(sorted(found))


def _find_one(og, l, cand, stack):
    if l == 2:
        in_cand = set(cand).__contains__
        out = og.out_neighbors
        for x in cand:
            for y in out(x):
                if in_cand(y):
                    return stack + [x, y]
        return None
    osets = og._osets
    for x in cand:
        sub = [y for y in cand if y in osets[x]]
        if len(sub) >= l - 1:
            stack.append(x)
            found = _find_one(og, l - 1, sub, stack)
            if found is not None:
                return found
            stack.pop()
    return None


def find_min(
    og: OrientedGraph,
    k: int,
    u: int,
    t: NodeScoreTable,
    pruning: bool = True,
    strict_ties: bool = True,
) -> tuple[Clique, int] | None:
    """Minimum-score k-clique containing ``u`` within ``{u} | N+(u)``.

    Returns ``(clique, score)`` or None.  Score ties are broken by canonical
    member order when ``strict_ties`` is set (so the result is the global
    minimum under the (score, members) key); otherwise the first equal-score
    clique encountered in scan order wins.  The score-driven pruning cuts a
    branch once the partial score plus the next node's score reaches the best
    score so far; every clique it skips scores strictly worse, so the result
    is identical with pruning on or off in both tie modes.
    """
    if not og.is_valid(u):
        raise ValueError(f"find_min requires a valid root, got removed node {u}")
    cand = og.out_neighbors(u)
    if len(cand) < k - 1:
        return None

    s = t.s_n
    best_score: int | None = None
    best_members: Clique | None = None

    def rec(l, cand, stack, s_cur):
        nonlocal best_score, best_members
        if l == 2:
            in_cand = set(cand).__contains__
            out = og.out_neighbors
            for x in cand:
                sx = s[x]
                if pruning and best_score is not None and s_cur + sx >= best_score:
                    continue
                for y in out(x):
                    if not in_cand(y):
                        continue
                    total = s_cur + sx + s[y]
                    if best_score is None or total < best_score:
                        members = stack + [x, y]
                        members.sort()
                        best_score = total
                        best_members = tuple(members)
                    elif strict_ties and total == best_score:
                        members = stack + [x, y]
                        members.sort()
                        mt = tuple(members)
                        if mt < best_members:
                            best_members = mt
        else:
            osets = og._osets
            for x in cand:
                sx = s[x]
                if pruning and best_score is not None and s_cur + sx >= best_score:
                    continue
                sub = [y for y in cand if y in osets[x]]
                if len(sub) >= l - 1:
                    stack.append(x)
                    rec(l - 1, sub, stack, s_cur + sx)
                    stack.pop()

    rec(k - 1, cand, [u], s[u])
    if best_members is None:
        return None
    return best_members, best_score


def count_cliques(og: OrientedGraph, k: int) -> int:
    """Total number of k-cliques (tau) without storing any of them."""
    _check_k(k)
    sink = [0] * og.n
    return _count_roots(og, k, range(og.n), sink)
