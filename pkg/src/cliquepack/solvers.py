"""Maximal disjoint k-clique solvers.

Three strategies over the same enumeration machinery:

* ``solve_hg`` — ordered framework: scan nodes in ascending rank, grab the
  first k-clique rooted at each and remove its nodes.
* ``solve_gc`` — materialize all k-cliques with their clique scores and accept
  greedily in ascending score order.
* ``solve_lp`` — heap-driven equivalent of ``solve_gc`` that never stores the
  clique set: one local-minimum clique per root in a min-heap, with lazy
  invalidation and per-root recomputation on conflicts.

With strict tie-breaking (ascending (score, canonical members) everywhere)
``solve_gc`` and ``solve_lp`` produce identical solutions; the relaxed mode
trades that guarantee for fewer tuple comparisons.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .enumeration import (
    Clique,
    NodeScoreTable,
    compute_node_scores,
    find_min,
    find_one,
    for_each_clique,
)
from .graph import (
    ORDER_DEGREE,
    ORDER_SCORE,
    Graph,
    NodeOrdering,
    OrientedGraph,
    build_ordering,
    orient,
)

DEFAULT_GC_CAP_BYTES = 2 * 1024**3

# CPython tuple of k small ints plus its slot in the clique list.
_BYTES_PER_CLIQUE_BASE = 64
_BYTES_PER_MEMBER = 8


class MemoryGuardError(RuntimeError):
    """The materialized clique set would exceed the configured budget."""

    def __init__(self, tau: int, estimated_bytes: int, cap_bytes: int):
        super().__init__(
            f"storing {tau} cliques needs ~{estimated_bytes} bytes, over the "
            f"{cap_bytes}-byte budget"
        )
        self.tau = tau
        self.estimated_bytes = estimated_bytes
        self.cap_bytes = cap_bytes


@dataclass
class SolutionSet:
    """A disjoint k-clique set plus the node-to-clique assignment.

    ``assignment[u]`` is the index of the clique containing ``u`` or None for
    a free node.
    """

    cliques: list[Clique]
    assignment: list[int | None]

    @classmethod
    def from_cliques(cls, n: int, cliques: Iterable[Clique]) -> "SolutionSet":
        cliques = [tuple(sorted(c)) for c in cliques]
        assignment: list[int | None] = [None] * n
        for i, c in enumerate(cliques):
            for u in c:
                if assignment[u] is not None:
                    raise ValueError(f"node {u} appears in two cliques")
                assignment[u] = i
        return cls(cliques, assignment)

    @property
    def size(self) -> int:
        return len(self.cliques)

    def free_nodes(self) -> list[int]:
        return [u for u, a in enumerate(self.assignment) if a is None]

    def canonical(self) -> tuple[Clique, ...]:
        return tuple(sorted(self.cliques))

    def validate(self, g: Graph, k: int) -> None:
        """Raise ValueError unless this is a consistent set of k-cliques of g."""
        if len(self.assignment) != g.n:
            raise ValueError("assignment length does not match the graph")
        seen: list[int | None] = [None] * g.n
        for i, c in enumerate(self.cliques):
            if len(c) != k or len(set(c)) != k:
                raise ValueError(f"clique {c} is not a set of {k} nodes")
            if list(c) != sorted(c):
                raise ValueError(f"clique {c} is not canonically sorted")
            for a in range(k):
                for b in range(a + 1, k):
                    if not g.has_edge(c[a], c[b]):
                        raise ValueError(f"clique {c} misses edge ({c[a]}, {c[b]})")
            for u in c:
                if seen[u] is not None:
                    raise ValueError(f"node {u} appears in two cliques")
                seen[u] = i
        if seen != self.assignment:
            raise ValueError("assignment is inconsistent with the clique list")


@dataclass(frozen=True)
class HeapEntry:
    """A root's current local-minimum clique; owner is the max-rank member."""

    clique: Clique
    score: int
    owner: int


def solve_hg(g: Graph, k: int, ordering: NodeOrdering | None = None) -> SolutionSet:
    """Ordered framework: first-found clique per root, ascending rank scan.

    Defaults to the degree ordering (larger degree, larger rank).
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if ordering is None:
        ordering = build_ordering(g, ORDER_DEGREE)
    og = orient(g, ordering)
    cliques: list[Clique] = []
    for u in ordering.nodes_by_rank():
        if not og.is_valid(u) or og.out_degree(u) < k - 1:
            continue
        c = find_one(og, k, u)
        if c is None:
            continue
        for v in c:
            og.remove_node(v)
        cliques.append(c)
    return SolutionSet.from_cliques(g.n, cliques)


def solve_gc(
    g: Graph,
    k: int,
    cap_bytes: int = DEFAULT_GC_CAP_BYTES,
    strict_ties: bool = True,
) -> SolutionSet:
    """Greedy acceptance over all k-cliques in ascending clique-score order."""
    og = orient(g, build_ordering(g, ORDER_DEGREE))
    scores = compute_node_scores(og, k)
    per_clique = _BYTES_PER_CLIQUE_BASE + _BYTES_PER_MEMBER * k
    estimated = scores.tau * per_clique
    if estimated > cap_bytes:
        raise MemoryGuardError(scores.tau, estimated, cap_bytes)

    s = scores.s_n
    entries: list[tuple[int, Clique]] = []
    for_each_clique(og, k, lambda c: entries.append((sum(s[u] for u in c), c)))
    if strict_ties:
        entries.sort()
    else:
        entries.sort(key=lambda e: e[0])  # stable: ties keep enumeration order

    taken = bytearray(g.n)
    cliques: list[Clique] = []
    for _, c in entries:
        if any(taken[u] for u in c):
            continue
        for u in c:
            taken[u] = 1
        cliques.append(c)
    return SolutionSet.from_cliques(g.n, cliques)


def initial_heap(
    og: OrientedGraph,
    k: int,
    scores: NodeScoreTable,
    pruning: bool = True,
    strict_ties: bool = True,
    threads: int = 1,
) -> list[HeapEntry]:
    """One local-minimum clique per qualifying root, sorted by heap key.

    The per-root searches are read-only and independent, so they can run on a
    thread pool; entries are merged and sorted afterwards, which keeps the
    result independent of the thread count.
    """
    def scan(roots) -> list[HeapEntry]:
        found = []
        for u in roots:
            if og.is_valid(u) and og.out_degree(u) >= k - 1:
                r = find_min(og, k, u, scores, pruning, strict_ties)
                if r is not None:
                    members, score = r
                    found.append(HeapEntry(members, score, u))
        return found

    n = og.n
    if threads <= 1 or n < 2 * threads:
        entries = scan(range(n))
    else:
        chunk = (n + threads - 1) // threads
        ranges = [range(i, min(i + chunk, n)) for i in range(0, n, chunk)]
        entries = []
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(scan, ranges):
                entries.extend(part)
    entries.sort(key=lambda e: (e.score, e.clique))
    return entries


def solve_lp(
    g: Graph,
    k: int,
    pruning: bool = True,
    threads: int = 1,
    strict_ties: bool = True,
) -> SolutionSet:
    """Heap-driven greedy: global minimum-score clique first, without storing
    the clique set.

    Node scores are counted on a degree-ordered DAG, then the graph is
    re-oriented by the node-score ordering.  Entries whose clique lost a node
    are discarded on pop and the owner's local minimum is recomputed over the
    residual graph.  Space beyond the graph and the heap is O(m + n).
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    scores = compute_node_scores(orient(g, build_ordering(g, ORDER_DEGREE)), k, threads)
    ordering = build_ordering(g, ORDER_SCORE, scores=scores.s_n)
    og = orient(g, ordering)

    seq = 0  # pop order fallback for relaxed ties
    if strict_ties:
        heap = [(e.score, e.clique, e.owner) for e in initial_heap(og, k, scores, pruning, True, threads)]
    else:
        heap = []
        for e in initial_heap(og, k, scores, pruning, False, threads):
            heap.append((e.score, seq, e.clique, e.owner))
            seq += 1
    # Entries are pre-sorted, which is already a valid heap layout.

    is_valid = og.is_valid
    cliques: list[Clique] = []
    while heap:
        if strict_ties:
            score, members, owner = heapq.heappop(heap)
        else:
            score, _, members, owner = heapq.heappop(heap)
        if all(is_valid(u) for u in members):
            for u in members:
                og.remove_node(u)
            cliques.append(members)
        elif is_valid(owner) and og.out_degree(owner) >= k - 1:
            r = find_min(og, k, owner, scores, pruning, strict_ties)
            if r is not None:
                members, score = r
                if strict_ties:
                    heapq.heappush(heap, (score, members, owner))
                else:
                    heapq.heappush(heap, (score, seq, members, owner))
                    seq += 1
    return SolutionSet.from_cliques(g.n, cliques)


def verify_maximal(g: Graph, k: int, s: SolutionSet) -> bool:
    """True iff no k-clique can be added, i.e. the free nodes span none."""
    free = s.free_nodes()
    if len(free) < k:
        return True
    sub = Graph.from_edges(
        ((u, v) for u in free for v in g.adj[u] if v > u and s.assignment[v] is None),
        nodes=free,
    )
    og = orient(sub, build_ordering(sub, ORDER_DEGREE))
    for u in range(sub.n):
        if og.out_degree(u) >= k - 1 and find_one(og, k, u) is not None:
            return False
    return True
