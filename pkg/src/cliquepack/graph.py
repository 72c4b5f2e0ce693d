"""Undirected simple graphs with dense node ids, total orderings and DAG orientation.

Graphs are loaded from whitespace-separated edge lists.  External node labels
(arbitrary integers) are remapped to dense internal ids in ``[0, n)``; the
label map is retained so results can be reported in the input's vocabulary.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

ORDER_DEGREE = "degree"
ORDER_SCORE = "score"
ORDER_NATURAL = "natural"

ORDER_KINDS = (ORDER_DEGREE, ORDER_SCORE, ORDER_NATURAL)


class ParseError(ValueError):
    """Malformed edge-list or update-stream input."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class Graph:
    """Undirected simple graph over dense node ids.

    Invariants: no self-loops, no parallel edges, adjacency lists strictly
    ascending and symmetric, ``m`` equals half the sum of list lengths.
    Instances are safe to share read-only across threads; mutation must be
    single-writer with no concurrent readers.
    """

    __slots__ = ("adj", "_sets", "m", "labels", "_label_to_id")

    def __init__(self, n: int = 0, labels: Iterable[int] | None = None):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self._sets: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        self.labels: list[int] = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise ValueError("labels must have one entry per node")
        self._label_to_id: dict[int, int] = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def n(self) -> int:
        return len(self.adj)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def neighbors(self, u: int) -> list[int]:
        return self.adj[u]

    def neighbor_set(self, u: int) -> set[int]:
        # Shared internal set; callers must not mutate it.
        return self._sets[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adj):
            for v in row:
                if v > u:
                    yield (u, v)

    def id_of(self, label: int) -> int | None:
        return self._label_to_id.get(label)

    def label_of(self, u: int) -> int:
        return self.labels[u]

    def to_external(self, members: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.labels[u] for u in members))

    def _check_ids(self, u: int, v: int) -> None:
        n = self.n
        if u == v:
            raise ValueError(f"self-loop rejected: {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"node id out of range: ({u}, {v}) with n={n}")

    def insert_edge(self, u: int, v: int) -> bool:
        """Add the edge ``(u, v)``; returns True iff the graph changed."""
        self._check_ids(u, v)
        if v in self._sets[u]:
            return False
        bisect.insort(self.adj[u], v)
        bisect.insort(self.adj[v], u)
        self._sets[u].add(v)
        self._sets[v].add(u)
        self.m += 1
        return True

    def delete_edge(self, u: int, v: int) -> bool:
        """Remove the edge ``(u, v)``; returns True iff the graph changed."""
        self._check_ids(u, v)
        if v not in self._sets[u]:
            return False
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self._sets[u].discard(v)
        self._sets[v].discard(u)
        self.m -= 1
        return True

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.adj = [list(row) for row in self.adj]
        g._sets = [set(s) for s in self._sets]
        g.m = self.m
        g.labels = list(self.labels)
        g._label_to_id = dict(self._label_to_id)
        return g

    def validate(self) -> None:
        """Raise ValueError if any structural invariant is broken."""
        total = 0
        for u, row in enumerate(self.adj):
            if any(row[i] >= row[i + 1] for i in range(len(row) - 1)):
                raise ValueError(f"adjacency of {u} not strictly ascending")
            if u in self._sets[u]:
                raise ValueError(f"self-loop at {u}")
            if set(row) != self._sets[u]:
                raise ValueError(f"list/set mismatch at {u}")
            for v in row:
                if u not in self._sets[v]:
                    raise ValueError(f"asymmetric edge ({u}, {v})")
            total += len(row)
        if total != 2 * self.m:
            raise ValueError(f"edge count mismatch: m={self.m}, lists sum to {total}")

    def write_label_map(self, fp) -> None:
        """Write one "internal external" line per node."""
        for i, lab in enumerate(self.labels):
            fp.write(f"{i} {lab}\n")

    @classmethod
    def from_edges(
        cls, pairs: Iterable[tuple[int, int]], nodes: Iterable[int] | None = None
    ) -> "Graph":
        """Build a graph from labelled edges, dropping self-loops and duplicates.

        ``nodes`` optionally widens the label universe (for isolated nodes).
        """
        pairs = list(pairs)
        label_set = set(nodes) if nodes is not None else set()
        for a, b in pairs:
            label_set.add(a)
            label_set.add(b)
        labels = sorted(label_set)
        g = cls(len(labels), labels)
        to_id = g._label_to_id
        for a, b in pairs:
            if a != b:
                g.insert_edge(to_id[a], to_id[b])
        return g


def load_edge_list(source: Iterable[str]) -> Graph:
    """Parse an edge list: one "u v" pair per line, '#'/'%' comment lines.

    Duplicate edges and self-loops are silently dropped.  Extra columns
    (weights, timestamps) after the first two are ignored so that common
    public dataset dumps load as-is.  Empty input yields an empty graph.
    """
    pairs: list[tuple[int, int]] = []
    extra_labels: set[int] = set()
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8", errors="replace")
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError(f"expected two node tokens, got {line!r}", lineno)
        try:
            a = int(tokens[0])
            b = int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node token in {line!r}", lineno) from None
        if a == b:
            extra_labels.add(a)
            continue
        pairs.append((a, b))
    return Graph.from_edges(pairs, nodes=extra_labels)


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fp:
        return load_edge_list(fp)


@dataclass(frozen=True)
class NodeOrdering:
    """A total node ordering: ``eta[u]`` is the rank of node ``u`` in [0, n)."""

    eta: tuple[int, ...]
    kind: str

    def rank(self, u: int) -> int:
        return self.eta[u]

    def nodes_by_rank(self) -> list[int]:
        inv = [0] * len(self.eta)
        for u, r in enumerate(self.eta):
            inv[r] = u
        return inv


def build_ordering(
    g: Graph, kind: str, scores: list[int] | None = None
) -> NodeOrdering:
    """Rank nodes ascending by the chosen key; ties broken by ascending id.

    ``degree`` ranks by node degree, ``score`` by the supplied per-node score
    table (so a larger score means a larger rank), ``natural`` is the identity.
    """
    n = g.n
    if kind == ORDER_NATURAL:
        return NodeOrdering(tuple(range(n)), kind)
    if kind == ORDER_DEGREE:
        key: Callable[[int], int] = lambda u: len(g.adj[u])
    elif kind == ORDER_SCORE:
        if scores is None or len(scores) != n:
            raise ValueError("score ordering requires a per-node score table")
        key = scores.__getitem__
    else:
        raise ValueError(f"unknown ordering kind {kind!r}")
    order = sorted(range(n), key=lambda u: (key(u), u))
    eta = [0] * n
    for rank, u in enumerate(order):
        eta[u] = rank
    return NodeOrdering(tuple(eta), kind)


class OrientedGraph:
    """DAG view of a graph under a total ordering: arc u->v iff eta(u) > eta(v).

    Out-lists are sorted by descending rank of the target, which fixes the
    scan order of every enumeration built on top.  Node removal is lazy:
    ``remove_node`` flips a validity flag and out-lists are compacted on the
    next scan, keeping removal amortized linear in degree.
    """

    __slots__ = ("n", "ordering", "_out", "_osets", "_valid", "_pristine")

    def __init__(self, n: int, ordering: NodeOrdering, out: list[list[int]]):
        self.n = n
        self.ordering = ordering
        self._out = out
        self._osets = [set(row) for row in out]
        self._valid = bytearray(b"\x01" * n)
        self._pristine = True

    def is_valid(self, u: int) -> bool:
        return bool(self._valid[u])

    def valid_count(self) -> int:
        return sum(self._valid)

    def out_neighbors(self, u: int) -> list[int]:
        """Current out-neighbors of ``u`` (callers must not mutate the list)."""
        lst = self._out[u]
        if self._pristine:
            return lst
        valid = self._valid
        live = [v for v in lst if valid[v]]
        if len(live) != len(lst):
            self._out[u] = live
        return live

    def out_degree(self, u: int) -> int:
        return len(self.out_neighbors(u))

    def out_set(self, u: int) -> set[int]:
        # May contain stale (removed) targets; only probe it with valid ids.
        return self._osets[u]

    def remove_node(self, u: int) -> None:
        """Invalidate ``u`` and drop its arcs.  Idempotent."""
        if not self._valid[u]:
            return
        self._valid[u] = 0
        self._pristine = False
        self._out[u] = []
        self._osets[u] = set()


def orient(g: Graph, ordering: NodeOrdering) -> OrientedGraph:
    """Direct every edge from the higher-ranked endpoint to the lower one."""
    eta = ordering.eta
    if len(eta) != g.n or sorted(eta) != list(range(g.n)):
        raise ValueError("ordering is not a permutation over the graph's nodes")
    out: list[list[int]] = []
    for u in range(g.n):
        ru = eta[u]
        row = [v for v in g.adj[u] if eta[v] < ru]
        row.sort(key=eta.__getitem__, reverse=True)
        out.append(row)
    return OrientedGraph(g.n, ordering, out)
