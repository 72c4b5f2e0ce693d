"""Exact reference machinery: the clique graph and an exact optimum solver.

A maximum set of disjoint k-cliques is exactly a maximum independent set of
the clique graph (one node per k-clique, edges between overlapping cliques).
Building that graph is only feasible at desk scale, which is the point: these
routines act as the referee for the approximate solvers, not as a product
path.  Everything here is single-threaded.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

from .enumeration import Clique, clique_score, compute_node_scores, count_cliques, for_each_clique
from .graph import ORDER_DEGREE, Graph, build_ordering, orient
from .solvers import SolutionSet

DEFAULT_CLIQUE_CAP = 200_000
DEFAULT_TIME_BUDGET = 60.0


class CapacityError(RuntimeError):
    """The instance has more k-cliques than the caller-supplied cap."""

    def __init__(self, tau: int, cap: int):
        super().__init__(f"instance has {tau} k-cliques, over the cap of {cap}")
        self.tau = tau
        self.cap = cap


class OracleTimeout(RuntimeError):
    """Search exceeded its time budget; carries the best solution found."""

    def __init__(self, best: SolutionSet, budget: float):
        super().__init__(f"exact search exceeded its {budget}s budget")
        self.best = best
        self.budget = budget


class ScoreBoundViolation(AssertionError):
    """A clique degree fell outside its score-derived bounds."""

    def __init__(self, clique: Clique, degree: int, lower: float, upper: int):
        super().__init__(
            f"clique {clique}: degree {degree} outside [{lower}, {upper}]"
        )
        self.clique = clique


@dataclass
class CliqueGraph:
    """All k-cliques of a host graph, with overlap adjacency between them."""

    n_nodes: int
    k: int
    cliques: list[Clique]
    overlap_adj: list[list[int]]


def build_clique_graph(g: Graph, k: int, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueGraph:
    """Materialize the clique graph; refuses instances with more than ``cap`` cliques."""
    og = orient(g, build_ordering(g, ORDER_DEGREE))
    tau = count_cliques(og, k)
    if tau > cap:
        raise CapacityError(tau, cap)
    cliques: list[Clique] = []
    for_each_clique(og, k, cliques.append)
    cliques.sort()

    # Link cliques that share a node via per-node membership lists.
    memberships: list[list[int]] = [[] for _ in range(g.n)]
    for i, c in enumerate(cliques):
        for u in c:
            memberships[u].append(i)
    nbrs: list[set[int]] = [set() for _ in cliques]
    for lst in memberships:
        for a in range(len(lst)):
            ia = lst[a]
            for b in range(a + 1, len(lst)):
                ib = lst[b]
                nbrs[ia].add(ib)
                nbrs[ib].add(ia)
    return CliqueGraph(g.n, k, cliques, [sorted(s) for s in nbrs])


def clique_degree(cg: CliqueGraph, i: int) -> int:
    return len(cg.overlap_adj[i])


def _greedy_seed(cg: CliqueGraph) -> list[int]:
    # Ascending clique-score greedy, the same rule the static solvers use.
    counts = [0] * cg.n_nodes
    for c in cg.cliques:
        for u in c:
            counts[u] += 1
    keyed = sorted(
        range(len(cg.cliques)),
        key=lambda i: (sum(counts[u] for u in cg.cliques[i]), cg.cliques[i]),
    )
    taken = bytearray(cg.n_nodes)
    chosen: list[int] = []
    for i in keyed:
        c = cg.cliques[i]
        if not any(taken[u] for u in c):
            for u in c:
                taken[u] = 1
            chosen.append(i)
    return chosen


def _components(avail: set[int], adj: list[set[int]]) -> list[set[int]]:
    comps: list[set[int]] = []
    left = set(avail)
    while left:
        start = min(left)
        comp = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y in left and y not in comp:
                    comp.add(y)
                    frontier.append(y)
        comps.append(comp)
        left -= comp
    return comps


def _matching_bound(avail: set[int], adj: list[set[int]]) -> int:
    # alpha <= |V| - |M| for any matching M; a greedy maximal one is cheap.
    matched: set[int] = set()
    m = 0
    for v in sorted(avail):
        if v in matched:
            continue
        for w in adj[v]:
            if w in avail and w not in matched:
                matched.add(v)
                matched.add(w)
                m += 1
                break
    return len(avail) - m


def _node_cover_bound(
    avail: set[int],
    members: list[Clique],
    node_cliques: list[list[int]],
    n_nodes: int,
    k: int,
) -> int:
    """Host-graph bounds on the independence number of the clique graph.

    Two ingredients: (i) every packed clique occupies k distinct host nodes,
    so alpha <= floor(active_hosts / k); (ii) all cliques through one host
    node are pairwise adjacent, so a greedy cover by host-node groups is a
    clique cover and its size bounds alpha as well.
    """
    count = [0] * n_nodes
    for i in avail:
        for u in members[i]:
            count[u] += 1
    capacity = sum(1 for c in count if c) // k
    remaining = set(avail)
    groups = 0
    while remaining:
        if groups >= capacity:
            return capacity
        u = max(range(n_nodes), key=count.__getitem__)
        groups += 1
        for i in node_cliques[u]:
            if i in remaining:
                remaining.discard(i)
                for w in members[i]:
                    count[w] -= 1
    return min(groups, capacity)


def exact_mis(
    cg: CliqueGraph, time_budget: float | None = DEFAULT_TIME_BUDGET
) -> SolutionSet:
    """Exact maximum disjoint k-clique set via branch and bound on the clique graph.

    Degree-0/1 and triangle-tip reductions, connected-component splitting,
    max-degree branching, and upper bounds from a greedy host-node clique
    cover plus a greedy matching.  Raises OracleTimeout (carrying the greedy
    incumbent) when the budget runs out.
    """
    ncl = len(cg.cliques)
    if ncl == 0:
        return SolutionSet.from_cliques(cg.n_nodes, [])
    adj = [set(a) for a in cg.overlap_adj]
    members = cg.cliques
    node_cliques: list[list[int]] = [[] for _ in range(cg.n_nodes)]
    for i, c in enumerate(members):
        for u in c:
            node_cliques[u].append(i)
    seed = _greedy_seed(cg)
    deadline = None if time_budget is None else time.perf_counter() + time_budget

    def upper(avail: set[int]) -> int:
        ub = _node_cover_bound(avail, members, node_cliques, cg.n_nodes, cg.k)
        if ub > 4:  # the matching bound only competes on sparse leftovers
            ub = min(ub, _matching_bound(avail, adj))
        return ub

    def reduce(avail: set[int], chosen: list[int]) -> None:
        changed = True
        while changed:
            changed = False
            for v in sorted(avail):
                if v not in avail:
                    continue
                nbrs = adj[v] & avail
                d = len(nbrs)
                if d == 0:
                    chosen.append(v)
                    avail.remove(v)
                    changed = True
                elif d == 1:
                    chosen.append(v)
                    avail.remove(v)
                    avail -= nbrs
                    changed = True
                elif d == 2:
                    a, b = nbrs
                    if a in adj[b]:
                        chosen.append(v)
                        avail.remove(v)
                        avail -= nbrs
                        changed = True

    def greedy_local(avail: set[int]) -> list[int]:
        left = set(avail)
        out: list[int] = []
        while left:
            v = min(left, key=lambda x: (len(adj[x] & left), x))
            out.append(v)
            left.discard(v)
            left -= adj[v]
        return out

    full_deg = [len(a) for a in adj]

    def dominate(avail: set[int]) -> bool:
        """Drop vertices with a neighbor whose closed neighborhood nests inside
        theirs; some maximum independent set always avoids them.  Only worth
        running on low-degree subgraphs, which the caller guards."""
        removed = False
        for v in sorted(avail):
            if v not in avail:
                continue
            av = adj[v] & avail
            for u in sorted(av):
                for w in adj[u]:
                    if w != v and w in avail and w not in av:
                        break
                else:
                    avail.remove(v)
                    removed = True
                    break
        return removed

    def mis_component(avail: set[int]) -> list[int]:
        """Exact maximum independent set of one induced subgraph.

        Branches over the bundle of cliques through one host node: at most
        one of them can be packed, so "take c" for each bundle member plus
        "take none" is a complete, fast-shrinking disjunction.
        """
        best = greedy_local(avail)

        def search(avail: set[int], chosen: list[int]) -> None:
            nonlocal best
            if deadline is not None and time.perf_counter() > deadline:
                raise _Stop
            reduce(avail, chosen)
            if avail and sum(full_deg[v] for v in avail) <= 48 * len(avail):
                if dominate(avail):
                    reduce(avail, chosen)
            if not avail:
                if len(chosen) > len(best):
                    best = chosen
                return
            if len(chosen) + upper(avail) <= len(best):
                return
            comps = _components(avail, adj)
            if len(comps) > 1:
                total = list(chosen)
                for comp in comps:
                    total += mis_component(comp)
                if len(total) > len(best):
                    best = total
                return
            count = [0] * cg.n_nodes
            for i in avail:
                for u in members[i]:
                    count[u] += 1
            u = max(range(cg.n_nodes), key=count.__getitem__)
            bundle = [i for i in node_cliques[u] if i in avail]
            bundle.sort(key=lambda i: (len(adj[i] & avail), i))
            for i in bundle:
                search(avail - adj[i] - {i}, chosen + [i])
            search(avail - set(bundle), list(chosen))

        search(set(avail), [])
        return best

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 3 * ncl + 1000))
    try:
        chosen: list[int] = []
        start: list[int] = []
        base = set(range(ncl))
        reduce(base, start)
        chosen += start
        for comp in _components(base, adj):
            chosen += mis_component(comp)
    except _Stop:
        best = SolutionSet.from_cliques(
            cg.n_nodes, [cg.cliques[i] for i in sorted(seed)]
        )
        raise OracleTimeout(best, time_budget) from None
    finally:
        sys.setrecursionlimit(old_limit)
    return SolutionSet.from_cliques(cg.n_nodes, [cg.cliques[i] for i in sorted(chosen)])


class _Stop(Exception):
    pass


@dataclass(frozen=True)
class ScoreBoundRow:
    """Degree of one clique next to its score-derived interval."""

    clique: Clique
    score: int
    lower: float
    upper: int
    degree: int

    @property
    def slack_low(self) -> float:
        return self.degree - self.lower

    @property
    def slack_high(self) -> int:
        return self.upper - self.degree

def check_score_bounds(
    g: Graph, k: int, cap: int = DEFAULT_CLIQUE_CAP
) -> list[ScoreBoundRow]:
    """Verify (s_c - k)/(k - 1) <= deg <= s_c - k for every k-clique.

    The clique score comes from the streaming score table and the degree from
    the materialized clique graph, so the two sides are computed
    independently.  Any violation raises ScoreBoundViolation.
    """
    cg = build_clique_graph(g, k, cap)
    t = compute_node_scores(orient(g, build_ordering(g, ORDER_DEGREE)), k)
    rows: list[ScoreBoundRow] = []
    for i, c in enumerate(cg.cliques):
        sc = clique_score(c, t)
        lower = (sc - k) / (k - 1)
        upper = sc - k
        deg = len(cg.overlap_adj[i])
        if not (lower <= deg <= upper):
            raise ScoreBoundViolation(c, deg, lower, upper)
        rows.append(ScoreBoundRow(c, sc, lower, upper, deg))
    return rows
