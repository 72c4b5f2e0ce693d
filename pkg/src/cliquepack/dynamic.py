"""Incremental maintenance of a disjoint k-clique solution under edge updates.

The state keeps, next to the solution itself, a candidate index: for every
solution clique ``C`` the set of k-cliques that contain at least one free
node and whose non-free nodes all lie in ``C``.  Those are exactly the
cliques a swap can trade against ``C``, so updates only ever touch the
affected neighborhoods instead of recomputing from scratch.

The state is single-writer: one update is processed at a time.  Readers may
snapshot the solution between updates.
"""

from __future__ import annotations

import time
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .enumeration import Clique
from .graph import Graph, ParseError
from .solvers import SolutionSet, solve_lp, verify_maximal

INSERT = "+"
DELETE = "-"

_ALL_FREE = object()  # transient classification marker, never stored


@dataclass(frozen=True)
class UpdateOp:
    kind: str  # INSERT or DELETE
    u: int
    v: int


@dataclass
class CandidateIndex:
    """Snapshot of the index: solution clique -> its candidate cliques."""

    by_anchor: dict[Clique, set[Clique]]

    def total(self) -> int:
        return sum(len(s) for s in self.by_anchor.values())


@dataclass
class ReplayMetrics:
    latencies: list[float]
    sizes: list[int]
    index_sizes: list[int]
    errors: list[tuple[int, str]]
    applied: int


class SwapQueue:
    """FIFO of solution cliques awaiting a swap attempt; no duplicate entries."""

    def __init__(self):
        self._q: deque[int] = deque()
        self._queued: set[int] = set()

    def push(self, cid: int) -> None:
        if cid not in self._queued:
            self._queued.add(cid)
            self._q.append(cid)

    def pop(self) -> int:
        cid = self._q.popleft()
        self._queued.discard(cid)
        return cid

    def __len__(self) -> int:
        return len(self._q)

    def __bool__(self) -> bool:
        return bool(self._q)


def _cliques_within(g: Graph, nodes: Iterable[int], size: int) -> list[tuple[int, ...]]:
    """All ``size``-cliques inside a node subset, ascending lexicographic order."""
    if size == 0:
        return [()]
    nodes = sorted(set(nodes))
    node_set = set(nodes)
    out: list[tuple[int, ...]] = []

    def rec(stack: list[int], cand: list[int]) -> None:
        need = size - len(stack)
        if need == 0:
            out.append(tuple(stack))
            return
        for i, x in enumerate(cand):
            if len(cand) - i < need:
                break
            nb = g.neighbor_set(x)
            stack.append(x)
            rec(stack, [y for y in cand[i + 1 :] if y in nb])
            stack.pop()

    rec([], [u for u in nodes if u in node_set])
    return out


def build_candidate_index(g: Graph, k: int, s: SolutionSet) -> CandidateIndex:
    """From-scratch candidate index for a maximal solution.

    For each solution clique ``C`` the search block is ``C`` plus the free
    neighbors of its nodes; every k-clique on the block other than ``C``
    itself is a candidate of ``C``.
    """
    s.validate(g, k)
    if not verify_maximal(g, k, s):
        raise ValueError("candidate index requires a maximal solution")
    assign = s.assignment
    by_anchor: dict[Clique, set[Clique]] = {}
    for c in s.cliques:
        block = set(c)
        for x in c:
            for y in g.adj[x]:
                if assign[y] is None:
                    block.add(y)
        by_anchor[c] = {m for m in _cliques_within(g, block, k) if m != c}
    return CandidateIndex(by_anchor)


class DynamicState:
    """A maintained solution plus candidate index over a mutable graph.

    Edge mutations go through ``Graph.insert_edge`` / ``Graph.delete_edge``
    first; ``apply_insert`` / ``apply_delete`` then restore the solution and
    index invariants.  After every public operation the solution is valid,
    disjoint and maximal, and the index equals a from-scratch rebuild.
    """

    def __init__(self, g: Graph, k: int, solution: SolutionSet | None = None):
        if solution is None:
            solution = solve_lp(g, k)
        index = build_candidate_index(g, k, solution)  # validates + maximality
        self.g = g
        self.k = k
        self.assign: list[int | None] = [None] * g.n
        self.cliques: dict[int, Clique] = {}
        self._next_id = 0
        self.anchor_cands: dict[int, set[Clique]] = {}
        self.cand_anchor: dict[Clique, int] = {}
        self.node_cands: list[set[Clique]] = [set() for _ in range(g.n)]
        by_clique_id: dict[Clique, int] = {}
        for c in solution.cliques:
            by_clique_id[c] = self._install_clique(c)
        for c, cands in index.by_anchor.items():
            cid = by_clique_id[c]
            for m in cands:
                self._register(m, cid)

    # -- inspection ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.cliques)

    @property
    def index_size(self) -> int:
        return len(self.cand_anchor)

    def solution(self) -> SolutionSet:
        return SolutionSet.from_cliques(self.g.n, sorted(self.cliques.values()))

    def candidate_index(self) -> CandidateIndex:
        return CandidateIndex(
            {self.cliques[cid]: set(cands) for cid, cands in self.anchor_cands.items()}
        )

    def check_consistency(self) -> None:
        """Assert all public invariants, comparing against a fresh rebuild."""
        sol = self.solution()
        sol.validate(self.g, self.k)
        if not verify_maximal(self.g, self.k, sol):
            raise AssertionError("maintained solution is not maximal")
        for members, cid in self.cand_anchor.items():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    if not self.g.has_edge(members[a], members[b]):
                        raise AssertionError(f"stale candidate {members}")
            if self._classify(members) != cid:
                raise AssertionError(f"candidate {members} has a wrong anchor")
        if build_candidate_index(self.g, self.k, sol) != self.candidate_index():
            raise AssertionError("candidate index differs from a scratch rebuild")

    # -- bookkeeping primitives ---------------------------------------------

    def _classify(self, members: Sequence[int]):
        """Anchor id for a would-be candidate, _ALL_FREE, or None if invalid."""
        anchors: set[int] = set()
        free = 0
        for x in members:
            a = self.assign[x]
            if a is None:
                free += 1
            else:
                anchors.add(a)
        if free == 0:
            return None
        if not anchors:
            return _ALL_FREE
        if len(anchors) == 1:
            return anchors.pop()
        return None

    def _register(self, members: Clique, cid: int) -> None:
        self.cand_anchor[members] = cid
        self.anchor_cands[cid].add(members)
        for x in members:
            self.node_cands[x].add(members)

    def _unregister(self, members: Clique) -> None:
        cid = self.cand_anchor.pop(members)
        self.anchor_cands[cid].discard(members)
        for x in members:
            self.node_cands[x].discard(members)

    def _install_clique(self, members: Clique) -> int:
        if members in self.cand_anchor:
            self._unregister(members)
        cid = self._next_id
        self._next_id += 1
        self.cliques[cid] = members
        for x in members:
            self.assign[x] = cid
        self.anchor_cands[cid] = set()
        return cid

    def _remove_clique(self, cid: int) -> tuple[Clique, set[Clique]]:
        members = self.cliques.pop(cid)
        for x in members:
            self.assign[x] = None
        orphans = self.anchor_cands.pop(cid)
        for c in orphans:
            del self.cand_anchor[c]
            for x in c:
                self.node_cands[x].discard(c)
        return members, orphans

    def _cliques_with_edge(self, u: int, v: int) -> list[Clique]:
        common = self.g.neighbor_set(u) & self.g.neighbor_set(v)
        pair = (u, v)
        return [
            tuple(sorted(pair + sub))
            for sub in _cliques_within(self.g, common, self.k - 2)
        ]

    def _cliques_with_node(self, f: int) -> list[Clique]:
        return [
            tuple(sorted((f,) + sub))
            for sub in _cliques_within(self.g, self.g.neighbor_set(f), self.k - 1)
        ]

    # -- invariant repair -----------------------------------------------------

    def _repair(
        self,
        changed: set[int],
        freed: set[int],
        pending: set[Clique] | None = None,
    ) -> set[int]:
        """Restore index completeness after membership changes.

        ``changed`` are nodes whose assignment changed in any direction,
        ``freed`` the subset that became free (around which brand-new
        candidates can appear), ``pending`` cliques already known to need
        classification.  Any all-free clique met along the way joins the
        solution immediately, which keeps the solution maximal.  Returns the
        ids of solution cliques whose candidate set gained an entry.
        """
        gained: set[int] = set()
        pending = set(pending) if pending else set()
        work_changed = set(changed) | set(freed)
        work_freed = set(freed)
        while work_changed or work_freed or pending:
            # Re-route indexed candidates that touch a changed node.
            affected: set[Clique] = set()
            for x in work_changed:
                affected |= self.node_cands[x]
            for members in sorted(affected):
                cur = self.cand_anchor.get(members)
                if cur is None:
                    continue
                cls = self._classify(members)
                if cls != cur:
                    self._unregister(members)
                    if cls is not None:
                        pending.add(members)
            # Brand-new candidates can only show up around freshly freed nodes.
            for f in sorted(work_freed):
                if self.assign[f] is None:
                    for members in self._cliques_with_node(f):
                        if members not in self.cand_anchor:
                            pending.add(members)
            work_changed = set()
            work_freed = set()
            # Settle: index what can be indexed, absorb one all-free clique.
            absorb: Clique | None = None
            deferred: set[Clique] = set()
            for members in sorted(pending):
                cls = self._classify(members)
                if cls is _ALL_FREE:
                    if absorb is None:
                        absorb = members
                    else:
                        deferred.add(members)
                elif cls is not None:
                    cur = self.cand_anchor.get(members)
                    if cur != cls:
                        if cur is not None:
                            self._unregister(members)
                        self._register(members, cls)
                        gained.add(cls)
            pending = deferred
            if absorb is not None:
                self._install_clique(absorb)
                work_changed = set(absorb)
        return gained

    # -- the swap loop --------------------------------------------------------

    def try_swap(self, q: SwapQueue) -> None:
        """Pop cliques and replace each by >= 2 disjoint candidates when possible.

        After a swap the index is repaired and every solution clique whose
        candidate set gained entries is enqueued.  The solution never shrinks.
        """
        while q:
            cid = q.pop()
            if cid not in self.cliques:
                continue
            cands = self.anchor_cands[cid]
            if len(cands) < 2:
                continue
            s_dis = _greedy_disjoint(cands)
            if len(s_dis) <= 1:
                continue
            members, orphans = self._remove_clique(cid)
            changed = set(members)
            for c in s_dis:
                orphans.discard(c)
                self._install_clique(c)
                changed.update(c)
            freed = {x for x in members if self.assign[x] is None}
            gained = self._repair(changed, freed, pending=orphans)
            for a in sorted(gained):
                if a in self.cliques:
                    q.push(a)

    # -- update handlers --------------------------------------------------------

    def apply_insert(self, u: int, v: int) -> None:
        """Handle an edge insertion already applied to the graph."""
        if not self.g.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) is not present in the graph")
        free_u = self.assign[u] is None
        free_v = self.assign[v] is None
        through = self._cliques_with_edge(u, v)
        if free_u and free_v:
            all_free = [
                c for c in through if all(self.assign[x] is None for x in c)
            ]
            if all_free:
                # A brand-new clique of free nodes joins the solution directly;
                # remaining through-cliques can only anchor at it, so no swap.
                first = all_free[0]
                self._install_clique(first)
                self._repair(set(first), set(), pending={c for c in through if c != first})
            else:
                q = SwapQueue()
                for a in sorted(self._repair(set(), set(), pending=set(through))):
                    q.push(a)
                self.try_swap(q)
        elif free_u or free_v:
            anchored = self.assign[v if free_u else u]
            gained = self._repair(set(), set(), pending=set(through))
            if gained:
                q = SwapQueue()
                q.push(anchored)
                self.try_swap(q)
        else:
            # Both endpoints already placed: only the index can change, and only
            # with candidates anchored at a single shared clique.
            self._repair(set(), set(), pending=set(through))

    def apply_delete(self, u: int, v: int) -> None:
        """Handle an edge deletion already applied to the graph."""
        if self.g.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) is still present in the graph")
        for members in [c for c in self.node_cands[u] if v in c]:
            self._unregister(members)  # no longer cliques
        au = self.assign[u]
        if au is not None and au == self.assign[v]:
            members, orphans = self._remove_clique(au)
            gained = self._repair(set(members), set(members), pending=orphans)
            q = SwapQueue()
            for a in sorted(gained):
                if a in self.cliques:
                    q.push(a)
            self.try_swap(q)


def _greedy_disjoint(cands: Iterable[Clique]) -> list[Clique]:
    """Score-greedy disjoint subset of a candidate family.

    Scores are local membership counts within the family, mirroring the
    ascending clique-score greedy used by the static solvers.
    """
    cands = sorted(cands)
    counts: Counter[int] = Counter()
    for c in cands:
        counts.update(c)
    keyed = sorted(cands, key=lambda c: (sum(counts[x] for x in c), c))
    used: set[int] = set()
    chosen: list[Clique] = []
    for c in keyed:
        if used.isdisjoint(c):
            chosen.append(c)
            used.update(c)
    return chosen


def try_swap(state: DynamicState, q: SwapQueue) -> None:
    state.try_swap(q)


def apply_insert(state: DynamicState, u: int, v: int) -> None:
    state.apply_insert(u, v)


def apply_delete(state: DynamicState, u: int, v: int) -> None:
    state.apply_delete(u, v)


def replay(state: DynamicState, ops: Sequence[UpdateOp], verify: bool = False) -> ReplayMetrics:
    """Apply a stream of updates, recording per-op latency and trajectories.

    Ops referencing out-of-range nodes (or self-loops) are recorded as errors
    and the stream continues.  No-op updates (inserting a present edge,
    deleting an absent one) leave the state untouched.
    """
    latencies: list[float] = []
    sizes: list[int] = []
    index_sizes: list[int] = []
    errors: list[tuple[int, str]] = []
    applied = 0
    for i, op in enumerate(ops):
        t0 = time.perf_counter()
        try:
            if op.kind == INSERT:
                if state.g.insert_edge(op.u, op.v):
                    state.apply_insert(op.u, op.v)
                    applied += 1
            elif op.kind == DELETE:
                if state.g.delete_edge(op.u, op.v):
                    state.apply_delete(op.u, op.v)
                    applied += 1
            else:
                raise ValueError(f"unknown update kind {op.kind!r}")
        except ValueError as exc:
            errors.append((i, str(exc)))
        latencies.append(time.perf_counter() - t0)
        sizes.append(state.size)
        index_sizes.append(state.index_size)
        if verify:
            state.check_consistency()
    return ReplayMetrics(latencies, sizes, index_sizes, errors, applied)


def parse_update_stream(lines: Iterable[str]) -> list[UpdateOp]:
    """Parse "+ u v" / "- u v" lines; '#' starts a comment line."""
    ops: list[UpdateOp] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3 or tokens[0] not in (INSERT, DELETE):
            raise ParseError(f"expected '+ u v' or '- u v', got {line!r}", lineno)
        try:
            a, b = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise ParseError(f"non-integer node token in {line!r}", lineno) from None
        ops.append(UpdateOp(tokens[0], a, b))
    return ops
